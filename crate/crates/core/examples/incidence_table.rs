//! Decides every connected cubic structure on the given vertex counts.
//!
//! `cargo run --release --example incidence_table -- 4 6 8 10`

use ksparity::incidence::{decide_structure, generate_cubic_structures, Verdict};

fn main() {
    let ns: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("vertex count")).collect();
    for n in if ns.is_empty() { vec![4, 6, 8, 10] } else { ns } {
        let (mut yes, mut no, mut open) = (0, 0, 0);
        for (k, inc) in generate_cubic_structures(n).expect("even n >= 4").iter().enumerate() {
            let d = decide_structure(inc, 2).expect("decision");
            let r = d.report(inc);
            match d.verdict {
                Verdict::ProofFound(_) => yes += 1,
                Verdict::NoProofPossible => no += 1,
                Verdict::Inconclusive(_) => open += 1,
            }
            println!(
                "n={n} #{k:<3} {:<16} {:?} rules={} product={}",
                r.verdict, r.rewrite_order, r.rewrite_rules, r.product_normal_form
            );
        }
        println!("n={n}: {yes} producing, {no} not, {open} inconclusive");
    }
}
