//! Step-by-step walkthrough of one sensor/base-station pair.
//!
//! Run with: `cargo run -p dualpred --example sensor_demo`

use dualpred::{BaseStation, DEFAULT_PID_GAINS, SensorNode, gen_sine, summarize};

fn main() {
    let trace = gen_sine(10.0, 40.0, 120).unwrap();
    let eps = 0.5;
    let m = 3;

    let mut sensor = SensorNode::new(DEFAULT_PID_GAINS, m, eps).unwrap();
    let mut station = BaseStation::new(DEFAULT_PID_GAINS, m).unwrap();

    println!(
        "{:>4} {:>9} {:>9} {:>9} {:>9}  {}",
        "k", "sample", "predicted", "recorded", "error", "sent?"
    );
    let mut ledger = Vec::new();
    for &x in &trace.values {
        let (entry, tx) = sensor.step(x).unwrap();
        let mirrored = station.step(tx.as_ref()).unwrap();
        assert_eq!(entry.record.to_bits(), mirrored.record.to_bits());

        if entry.k < 12 {
            let predicted = entry
                .prediction
                .map(|p| format!("{p:>9.4}"))
                .unwrap_or_else(|| format!("{:>9}", "-"));
            println!(
                "{:>4} {:>9.4} {} {:>9.4} {:>9.4}  {}",
                entry.k,
                entry.sample,
                predicted,
                entry.record,
                entry.data_error,
                if entry.transmitted { "yes" } else { "" }
            );
        }
        ledger.push(entry);
    }

    let report = summarize(&ledger, &trace.name, "PID", eps, m).unwrap();
    println!("...");
    println!(
        "transmitted {} of {} samples (energy ratio {:.3})",
        report.n_tx, report.k_total, report.energy_ratio
    );
    println!(
        "max |data error| {:.4} <= eps {eps}, violations {}",
        report.max_abs_data_error, report.violations
    );
}
