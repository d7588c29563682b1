//! Elapsed-contact dispersion and average out-degree mode for the reference
//! mobility worlds and the bursty community trace.

use std::time::Instant;

use frt::graph::TemporalContactGraph;
use frt::metrics::tree_delay_records;
use frt::mobility::{bursty_trace, generate_contacts, BurstyConfig, MobilityConfig};
use frt::spread::{evenly_spaced_frames, sweep_map, PropagationMode, SweepSpec};
use frt::stats::{summary, DegreeAverages};

fn report(name: &str, g: &TemporalContactGraph, mode: PropagationMode) {
    let first = g.first_active_frame().unwrap();
    let last = g.last_active_frame().unwrap();
    let spec = SweepSpec::all_roots(g, evenly_spaced_frames(first, last, times()), mode);
    let per_tree = sweep_map(g, &spec, |_, t| {
        let clocks: Vec<f64> = tree_delay_records(g, &t)
            .unwrap()
            .iter()
            .map(|r| r.elapsed_contact as f64)
            .collect();
        (clocks, t.out_degrees())
    })
    .unwrap();
    let mut clocks = Vec::new();
    let mut deg = DegreeAverages::new();
    for (c, d) in &per_tree {
        clocks.extend_from_slice(c);
        deg.add_tree(d);
    }
    let s = summary(&clocks).unwrap();
    let h = deg.density(0.1).unwrap();
    println!(
        "{name:>8} {mode}: n={} avg={:.2} std={:.2} ratio={:.4} degree-mode={:.2} edges={}",
        s.count,
        s.average,
        s.standard_deviation,
        s.dispersion_ratio,
        h.mode().unwrap().center(),
        g.edge_frame_count()
    );
    let avgs: Vec<f64> = deg.averages().into_values().collect();
    let mean = avgs.iter().sum::<f64>() / avgs.len() as f64;
    let sizes: f64 = per_tree.iter().map(|(c, _)| c.len() as f64).sum::<f64>() / per_tree.len() as f64;
    println!("   mean avg-degree {mean:.3}, mean tree size {sizes:.1}");
    for b in &h.bins {
        println!("   [{:.1},{:.1}) {:.3}", b.left, b.right, b.mass());
    }
}

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    for cfg in [MobilityConfig::reference_rwp(seed), MobilityConfig::reference_tlw(seed)] {
        let t = Instant::now();
        let g = generate_contacts(&cfg).unwrap();
        eprintln!("generated {:?} in {:?}", cfg.model, t.elapsed());
        for mode in PropagationMode::ALL {
            report(&format!("{:?}", cfg.model), &g, mode);
        }
    }
    let g = bursty_trace(&BurstyConfig {
        seed,
        ..BurstyConfig::default()
    })
    .unwrap();
    for mode in PropagationMode::ALL {
        report("bursty", &g, mode);
    }
}

fn times() -> usize {
    std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(50)
}
