//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use biso_core::verify::{self, CheckOutcome, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = DEFAULT_SEED;
    let checks: Vec<(&str, Box<dyn Fn() -> CheckOutcome>)> = vec![
        ("1", Box::new(verify::closed_form_capacities)),
        ("2", Box::new(move || verify::oracle_equivalence(seed))),
        ("3", Box::new(move || verify::bsc_bec_sandwich(seed))),
        ("4", Box::new(move || verify::ternary_comparable(seed))),
        ("5", Box::new(verify::crossing_pair)),
        ("6", Box::new(move || verify::five_way_equivalence(seed))),
        ("7", Box::new(move || verify::nesting(seed))),
        ("8", Box::new(move || verify::binary_aux_suffices(seed))),
        ("9", Box::new(move || verify::symmetrization(seed))),
        ("10", Box::new(verify::gerber_convexity)),
        ("11", Box::new(verify::better_receiver)),
        ("12", Box::new(move || verify::dominance_chains(seed))),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();

    let mut failed = 0;
    for (id, check) in &checks {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let out = check();
        println!("{out} ({:.1}s)", start.elapsed().as_secs_f64());
        if !out.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
