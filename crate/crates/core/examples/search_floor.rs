//! Prints the worst-case residual floor of the candidate search for a few
//! ancilla sizes and budgets.
//!
//! cargo run --release -p qconv-core --example search_floor -- [restarts] [budget...]

use std::time::Instant;

use qconv_core::nogo::{search_best_candidate, ProbeSetRegistry, SearchConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let restarts: usize = args.next().map_or(50, |s| s.parse().expect("restarts"));
    let budgets: Vec<usize> = args.map(|s| s.parse().expect("budget")).collect();
    let budgets = if budgets.is_empty() {
        vec![200, 400]
    } else {
        budgets
    };
    let probes = ProbeSetRegistry::standard();

    for m in [1, 2] {
        for &budget in &budgets {
            let cfg = SearchConfig {
                register_dim: 2,
                ancilla_dim: m,
                restarts,
                budget,
                seed: 2003,
            };
            let t = Instant::now();
            let out = search_best_candidate(&cfg, &probes).expect("search");
            let mut sorted = out.restart_residuals.clone();
            sorted.sort_by(f64::total_cmp);
            println!(
                "M={m} budget={budget:5} floor={:.9} restart={} median={:.6} [{:.1?}]",
                out.worst_case_residual,
                out.best_restart,
                sorted[sorted.len() / 2],
                t.elapsed()
            );
        }
    }
}
