//! JSON file formats.
//!
//! Sequence: `[[re, im], ...]`.
//! State: `{"num_qubits": n, "amplitudes": [[re, im], ...]}`.
//!
//! Writers print every number with 17 significant digits, so values round
//! trip exactly. Readers reject non-finite values; the state reader also
//! rejects amplitudes that are not unit norm.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::qsim::QuantumState;
use crate::spectral::ComplexSequence;

fn push_number(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String");
}

fn push_pairs(out: &mut String, values: &[Complex64]) {
    out.push('[');
    for (i, z) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        push_number(out, z.re);
        out.push_str(", ");
        push_number(out, z.im);
        out.push(']');
    }
    out.push(']');
}

fn to_complex(pairs: Vec<[f64; 2]>) -> Result<Vec<Complex64>> {
    pairs
        .into_iter()
        .map(|[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(Complex64::new(re, im))
            } else {
                Err(Error::invalid("non-finite number in file"))
            }
        })
        .collect()
}

pub fn sequence_to_json(s: &ComplexSequence) -> String {
    let mut out = String::new();
    push_pairs(&mut out, s.as_slice());
    out.push('\n');
    out
}

pub fn sequence_from_json(text: &str) -> Result<ComplexSequence> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    ComplexSequence::new(to_complex(pairs)?)
}

pub fn read_sequence(path: &Path) -> Result<ComplexSequence> {
    sequence_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_sequence(path: &Path, s: &ComplexSequence) -> Result<()> {
    Ok(std::fs::write(path, sequence_to_json(s))?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    num_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

pub fn state_to_json(s: &QuantumState) -> String {
    let mut out = format!("{{\"num_qubits\": {}, \"amplitudes\": ", s.num_qubits());
    push_pairs(&mut out, s.amplitudes());
    out.push_str("}\n");
    out
}

pub fn state_from_json(text: &str) -> Result<QuantumState> {
    let file: StateFile = serde_json::from_str(text)?;
    let expected = 1usize
        .checked_shl(file.num_qubits as u32)
        .filter(|_| file.num_qubits >= 1 && file.num_qubits < usize::BITS as usize)
        .ok_or_else(|| Error::invalid(format!("invalid num_qubits {}", file.num_qubits)))?;
    if file.amplitudes.len() != expected {
        return Err(Error::invalid(format!(
            "{} qubits need {expected} amplitudes, found {}",
            file.num_qubits,
            file.amplitudes.len()
        )));
    }
    QuantumState::from_amplitudes(to_complex(file.amplitudes)?)
}

pub fn read_state(path: &Path) -> Result<QuantumState> {
    state_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_state(path: &Path, s: &QuantumState) -> Result<()> {
    Ok(std::fs::write(path, state_to_json(s))?)
}
