//! Spread of per-node average out-degree across seeds and trace durations.

use frt::mobility::{generate_contacts, MobilityConfig, Model};
use frt::spread::{evenly_spaced_frames, sweep_map, PropagationMode, SweepSpec};
use frt::stats::DegreeAverages;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let hours: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    let seeds: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    for model in [Model::Rwp, Model::Tlw] {
        for mode in PropagationMode::ALL {
            let mut pass = 0;
            let mut spreads = Vec::new();
            for seed in 100..100 + seeds {
                let mut cfg = match model {
                    Model::Rwp => MobilityConfig::reference_rwp(seed),
                    Model::Tlw => MobilityConfig::reference_tlw(seed),
                };
                cfg.duration = hours * 3600;
                let g = generate_contacts(&cfg).unwrap();
                let frames = evenly_spaced_frames(g.first_active_frame().unwrap(), g.last_active_frame().unwrap(), 50);
                let spec = SweepSpec::all_roots(&g, frames, mode);
                let degs = sweep_map(&g, &spec, |_, t| t.out_degrees()).unwrap();
                let mut acc = DegreeAverages::new();
                degs.iter().for_each(|d| acc.add_tree(d));
                let avgs: Vec<f64> = acc.averages().into_values().collect();
                let m = avgs.iter().sum::<f64>() / avgs.len() as f64;
                let sd = (avgs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / avgs.len() as f64).sqrt();
                spreads.push(sd);
                let c = acc.density(0.1).unwrap().mode().unwrap().center();
                if (0.9..=1.1).contains(&c) {
                    pass += 1;
                }
            }
            let msd = spreads.iter().sum::<f64>() / spreads.len() as f64;
            println!("{model:?} {mode} {hours}h: mode in [0.9,1.1] for {pass}/{seeds} seeds, mean sd {msd:.3}");
        }
    }
}
