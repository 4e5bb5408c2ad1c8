//! Classical discrete Fourier transforms, cyclic convolution and correlation.
//!
//! All transforms use the unitary `1/sqrt(N)` normalization with a
//! *positive* exponent on the forward transform:
//!
//! ```text
//! dft(x)_j  = 1/sqrt(N) * sum_k x_k * exp(+2 pi i j k / N)
//! idft(y)_k = 1/sqrt(N) * sum_j y_j * exp(-2 pi i j k / N)
//! ```
//!
//! With this convention the convolution theorem reads
//! `dft(x * y) = sqrt(N) * dft(x) . dft(y)` and the fast paths rescale by
//! `sqrt(N)` after the inverse transform.
//!
//! [`dft`] and [`idft`] are direct `O(N^2)` sums and serve as oracles for the
//! radix-2 [`fft`]/[`ifft`]. Likewise [`convolve_direct`] and
//! [`correlate_direct`] check [`convolve_fast`] and [`correlate_fast`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A nonempty, finite list of complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence(Vec<Complex64>);

impl ComplexSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sequence must have at least one entry"));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("sequence entries must be finite"));
        }
        Ok(Self(values))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    // A sequence is never empty; provided for clippy's len_without_is_empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.0)
    }

    /// Largest absolute entrywise difference. Panics on length mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

impl std::ops::Index<usize> for ComplexSequence {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// A unit-norm sequence together with the norm that was divided out.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSequence {
    pub values: ComplexSequence,
    pub scale: f64,
}

impl NormalizedSequence {
    /// `scale * values`, i.e. the original sequence.
    pub fn denormalized(&self) -> ComplexSequence {
        ComplexSequence(self.values.0.iter().map(|z| z * self.scale).collect())
    }
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// exp(+2 pi i jk/N)
    Forward,
    /// exp(-2 pi i jk/N)
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Inverse => -1.0,
        }
    }
}

/// `table[m] = exp(sign * 2 pi i m / n)` for `m < len`, each entry evaluated
/// directly so errors do not accumulate along the table.
fn twiddles(n: usize, len: usize, dir: Direction) -> Vec<Complex64> {
    let step = dir.sign() * 2.0 * PI / n as f64;
    (0..len)
        .map(|m| Complex64::from_polar(1.0, step * m as f64))
        .collect()
}

fn direct_transform(s: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = s.len();
    let table = twiddles(n, n, dir);
    let scale = 1.0 / (n as f64).sqrt();
    // k outer, j inner: each output keeps its own accumulator, summed in
    // increasing k as before, but consecutive updates are independent.
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, x) in s.iter().enumerate() {
        let mut idx = 0usize; // j*k mod n
        for acc in out.iter_mut() {
            *acc += x * table[idx];
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
    }
    for z in &mut out {
        *z *= scale;
    }
    out
}

/// Direct-sum DFT, `a_j = 1/sqrt(N) sum_k alpha_k exp(+2 pi i jk/N)`.
pub fn dft(s: &ComplexSequence) -> ComplexSequence {
    ComplexSequence(direct_transform(&s.0, Direction::Forward))
}

/// Direct-sum inverse DFT, `alpha_k = 1/sqrt(N) sum_j a_j exp(-2 pi i jk/N)`.
pub fn idft(s: &ComplexSequence) -> ComplexSequence {
    ComplexSequence(direct_transform(&s.0, Direction::Inverse))
}

/// Iterative radix-2 transform with bit-reversal reordering, in place.
fn radix2_in_place(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n == 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }

    let table = twiddles(n, n / 2, dir);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = table[k * stride];
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }

    let scale = 1.0 / (n as f64).sqrt();
    for z in buf.iter_mut() {
        *z *= scale;
    }
}

fn require_power_of_two(len: usize) -> Result<()> {
    if len.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "fast transform requires a power-of-two length, got {len}"
        )))
    }
}

/// Radix-2 FFT with the same convention as [`dft`].
pub fn fft(s: &ComplexSequence) -> Result<ComplexSequence> {
    require_power_of_two(s.len())?;
    let mut buf = s.0.clone();
    radix2_in_place(&mut buf, Direction::Forward);
    Ok(ComplexSequence(buf))
}

/// Radix-2 inverse FFT with the same convention as [`idft`].
pub fn ifft(s: &ComplexSequence) -> Result<ComplexSequence> {
    require_power_of_two(s.len())?;
    let mut buf = s.0.clone();
    radix2_in_place(&mut buf, Direction::Inverse);
    Ok(ComplexSequence(buf))
}

fn require_equal_lengths(s1: &ComplexSequence, s2: &ComplexSequence) -> Result<usize> {
    if s1.len() != s2.len() {
        return Err(Error::invalid(format!(
            "sequence lengths differ: {} vs {}",
            s1.len(),
            s2.len()
        )));
    }
    Ok(s1.len())
}

/// Cyclic convolution, `gamma_k = sum_j alpha_j beta_{(k-j) mod N}`.
pub fn convolve_direct(s1: &ComplexSequence, s2: &ComplexSequence) -> Result<ComplexSequence> {
    let n = require_equal_lengths(s1, s2)?;
    let out = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| s1.0[j] * s2.0[(k + n - j) % n])
                .sum::<Complex64>()
        })
        .collect();
    Ok(ComplexSequence(out))
}

/// Cyclic correlation, `gamma_k = sum_j conj(alpha_j) beta_{(k+j) mod N}`.
pub fn correlate_direct(s1: &ComplexSequence, s2: &ComplexSequence) -> Result<ComplexSequence> {
    let n = require_equal_lengths(s1, s2)?;
    let out = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| s1.0[j].conj() * s2.0[(k + j) % n])
                .sum::<Complex64>()
        })
        .collect();
    Ok(ComplexSequence(out))
}

fn spectral_product(
    s1: &ComplexSequence,
    s2: &ComplexSequence,
    conjugate_first: bool,
) -> Result<ComplexSequence> {
    let n = require_equal_lengths(s1, s2)?;
    let f1 = fft(s1)?;
    let f2 = fft(s2)?;
    let product =
        f1.0.iter()
            .zip(&f2.0)
            .map(|(x, y)| if conjugate_first { x.conj() * y } else { x * y })
            .collect();
    let mut out = ifft(&ComplexSequence(product))?;
    let rescale = (n as f64).sqrt();
    for z in out.0.iter_mut() {
        *z *= rescale;
    }
    Ok(out)
}

/// FFT both inputs, multiply componentwise, inverse FFT, scale by `sqrt(N)`.
pub fn convolve_fast(s1: &ComplexSequence, s2: &ComplexSequence) -> Result<ComplexSequence> {
    spectral_product(s1, s2, false)
}

/// As [`convolve_fast`] with the first spectrum conjugated before the product.
pub fn correlate_fast(s1: &ComplexSequence, s2: &ComplexSequence) -> Result<ComplexSequence> {
    spectral_product(s1, s2, true)
}

/// Appends `N` zeros, doubling the length.
pub fn pad_zeros(s: &ComplexSequence) -> ComplexSequence {
    let mut v = s.0.clone();
    v.resize(2 * s.len(), Complex64::new(0.0, 0.0));
    ComplexSequence(v)
}

pub fn normalize(s: &ComplexSequence) -> Result<NormalizedSequence> {
    let scale = s.norm();
    if scale == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let values = ComplexSequence(s.0.iter().map(|z| z / scale).collect());
    Ok(NormalizedSequence { values, scale })
}

/// Index of the entry the padding construction guarantees to be nonzero in
/// `convolve_direct(pad(s1), pad(s2))`: `i0 + j0` with `i0`, `j0` the first
/// nonzero indices. `None` if either input is all zero.
pub fn padded_convolution_witness(s1: &ComplexSequence, s2: &ComplexSequence) -> Option<usize> {
    let i0 = s1.0.iter().position(|z| *z != Complex64::new(0.0, 0.0))?;
    let j0 = s2.0.iter().position(|z| *z != Complex64::new(0.0, 0.0))?;
    Some(i0 + j0)
}

/// Witness index for `correlate_direct(pad(s1), pad(s2))`: `(j0 - i1) mod 2N`
/// with `i1` the last nonzero index of `s1` and `j0` the first of `s2`.
pub fn padded_correlation_witness(s1: &ComplexSequence, s2: &ComplexSequence) -> Option<usize> {
    let zero = Complex64::new(0.0, 0.0);
    let i1 = s1.0.iter().rposition(|z| *z != zero)?;
    let j0 = s2.0.iter().position(|z| *z != zero)?;
    let padded = 2 * s1.len();
    Some((j0 + padded - i1) % padded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_gaussian_vec, seeded};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seq(v: &[f64]) -> ComplexSequence {
        ComplexSequence::from_real(v).unwrap()
    }

    fn random_seq(seed: u64, n: usize) -> ComplexSequence {
        ComplexSequence::new(complex_gaussian_vec(&mut seeded(seed), n)).unwrap()
    }

    /// Textbook evaluation of the defining sum with `exp` recomputed per term.
    fn naive_transform(s: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = s.len() as f64;
        (0..s.len())
            .map(|j| {
                s.iter()
                    .enumerate()
                    .map(|(k, x)| {
                        x * Complex64::from_polar(1.0, sign * 2.0 * PI * (j * k) as f64 / n)
                    })
                    .sum::<Complex64>()
                    / n.sqrt()
            })
            .collect()
    }

    #[test]
    fn empty_sequence_rejected() {
        assert!(matches!(
            ComplexSequence::new(vec![]),
            Err(Error::InvalidInput(_))
        ));
        assert!(ComplexSequence::new(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn dft_of_delta_is_uniform() {
        let out = dft(&seq(&[1.0, 0.0, 0.0, 0.0]));
        for z in out.as_slice() {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn dft_of_uniform_is_delta() {
        let h = 1.0 / 2f64.sqrt();
        let out = dft(&seq(&[h, h]));
        assert!(out.max_abs_diff(&seq(&[1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn dft_matches_defining_sum() {
        let s = random_seq(1, 16);
        let want = naive_transform(s.as_slice(), 1.0);
        assert!(max_abs_diff(dft(&s).as_slice(), &want) < 1e-12);
        let want = naive_transform(s.as_slice(), -1.0);
        assert!(max_abs_diff(idft(&s).as_slice(), &want) < 1e-12);
    }

    #[test]
    fn dft_positive_exponent_convention() {
        // dft of delta at 1: a_j = exp(+2 pi i j/4)/2 -> a_1 = i/2
        let out = dft(&seq(&[0.0, 1.0, 0.0, 0.0]));
        assert_abs_diff_eq!(out[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out[1].im, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn idft_of_delta() {
        let h = 1.0 / 2f64.sqrt();
        assert!(idft(&seq(&[1.0, 0.0])).max_abs_diff(&seq(&[h, h])) < 1e-15);
    }

    #[test]
    fn idft_inverts_dft() {
        let s = random_seq(2, 8);
        assert!(idft(&dft(&s)).max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn fft_delta() {
        let s = seq(&[1.0, 0.0, 0.0, 0.0]);
        assert!(fft(&s).unwrap().max_abs_diff(&dft(&s)) < 1e-15);
        assert!(fft(&s).unwrap().max_abs_diff(&seq(&[0.5; 4])) < 1e-15);
    }

    #[test]
    fn fft_rejects_non_power_of_two() {
        assert!(matches!(
            fft(&seq(&[1.0, 2.0, 3.0])),
            Err(Error::InvalidInput(_))
        ));
        assert!(ifft(&seq(&[1.0; 6])).is_err());
    }

    #[test]
    fn fft_length_one_is_identity() {
        let s = seq(&[3.5]);
        assert_eq!(fft(&s).unwrap(), s);
        assert_eq!(dft(&s), s);
    }

    #[test]
    fn ifft_inverts_fft_4096() {
        let s = random_seq(3, 4096);
        let back = ifft(&fft(&s).unwrap()).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-9);
    }

    #[test]
    fn convolution_hand_value() {
        let out = convolve_direct(&seq(&[1.0, 2.0]), &seq(&[3.0, 4.0])).unwrap();
        assert_eq!(out, seq(&[11.0, 10.0]));
        let fast = convolve_fast(&seq(&[1.0, 2.0]), &seq(&[3.0, 4.0])).unwrap();
        assert!(fast.max_abs_diff(&seq(&[11.0, 10.0])) < 1e-12);
    }

    #[test]
    fn convolution_with_delta_is_identity() {
        let s = random_seq(4, 8);
        let mut delta = vec![c(0.0, 0.0); 8];
        delta[0] = c(1.0, 0.0);
        let delta = ComplexSequence::new(delta).unwrap();
        assert!(convolve_direct(&delta, &s).unwrap().max_abs_diff(&s) < 1e-15);
        assert!(convolve_fast(&delta, &s).unwrap().max_abs_diff(&s) < 1e-12);
        assert!(correlate_direct(&delta, &s).unwrap().max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn correlation_hand_values() {
        let out = correlate_direct(&seq(&[1.0, 2.0]), &seq(&[3.0, 4.0])).unwrap();
        assert_eq!(out, seq(&[11.0, 10.0]));
        let a = ComplexSequence::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let b = seq(&[1.0, 0.0]);
        let out = correlate_direct(&a, &b).unwrap();
        assert_eq!(out.as_slice(), &[c(0.0, -1.0), c(0.0, 0.0)]);
        assert!(correlate_fast(&a, &b).unwrap().max_abs_diff(&out) < 1e-15);
    }

    #[test]
    fn length_mismatch_rejected() {
        let a = seq(&[1.0, 2.0]);
        let b = seq(&[1.0, 2.0, 3.0, 4.0]);
        assert!(convolve_direct(&a, &b).is_err());
        assert!(correlate_direct(&a, &b).is_err());
        assert!(convolve_fast(&a, &b).is_err());
    }

    #[test]
    fn fast_matches_direct_512() {
        let a = random_seq(5, 512);
        let b = random_seq(6, 512);
        let d = convolve_direct(&a, &b).unwrap();
        assert!(convolve_fast(&a, &b).unwrap().max_abs_diff(&d) < 1e-8);
        let d = correlate_direct(&a, &b).unwrap();
        assert!(correlate_fast(&a, &b).unwrap().max_abs_diff(&d) < 1e-8);
    }

    #[test]
    fn padding_appends_zeros() {
        assert_eq!(pad_zeros(&seq(&[1.0, 2.0])), seq(&[1.0, 2.0, 0.0, 0.0]));
        assert_eq!(pad_zeros(&seq(&[0.0, 5.0])), seq(&[0.0, 5.0, 0.0, 0.0]));
    }

    #[test]
    fn padded_convolution_nonzero_at_witness() {
        let a = seq(&[0.0, 2.0, 0.0, 1.0]);
        let b = seq(&[0.0, 0.0, 3.0, 0.0]);
        let (pa, pb) = (pad_zeros(&a), pad_zeros(&b));
        let k = padded_convolution_witness(&a, &b).unwrap();
        assert_eq!(k, 3);
        assert_eq!(convolve_direct(&pa, &pb).unwrap()[k], c(6.0, 0.0));
        let k = padded_correlation_witness(&a, &b).unwrap();
        // j0 - i1 = 2 - 3 = -1 = 7 mod 8; value alpha*_3 beta_2 = 3
        assert_eq!(k, 7);
        assert_eq!(correlate_direct(&pa, &pb).unwrap()[k], c(3.0, 0.0));
    }

    #[test]
    fn witness_none_for_zero_sequence() {
        assert!(padded_convolution_witness(&seq(&[0.0, 0.0]), &seq(&[1.0, 0.0])).is_none());
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&seq(&[3.0, 4.0])).unwrap();
        assert_eq!(n.scale, 5.0);
        assert!(n.values.max_abs_diff(&seq(&[0.6, 0.8])) < 1e-15);
        assert!(n.denormalized().max_abs_diff(&seq(&[3.0, 4.0])) < 1e-15);

        let n = normalize(&seq(&[1.0, 0.0])).unwrap();
        assert_eq!((n.scale, n.values), (1.0, seq(&[1.0, 0.0])));

        let n = normalize(&seq(&[1.0; 4])).unwrap();
        assert_eq!((n.scale, n.values), (2.0, seq(&[0.5; 4])));

        assert!(matches!(normalize(&seq(&[0.0, 0.0])), Err(Error::ZeroNorm)));
    }
}
