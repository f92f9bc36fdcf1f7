//! Regenerates `data/cusumsq_c0.txt`.
//!
//! For each table key m the CUSUMSQ path of n = 2(m + 1) i.i.d. normal
//! recursive residuals is simulated and c0 is the (1 - alpha) quantile of
//! max_r |S_r - r/n|, i.e. the two-sided band crossed with probability alpha.
//!
//!     cargo run --release -p ardlkit --example gen_cusumsq_table > crates/core/data/cusumsq_c0.txt

use ardlkit::dist::quantile_sorted;
use ardlkit::rng;
use rayon::prelude::*;

const SEED: u64 = 20_010_101;
const REPS: usize = 100_000;
const ALPHAS: [(f64, &str); 4] = [(0.10, "10%"), (0.05, "5%"), (0.025, "2.5%"), (0.01, "1%")];

fn max_deviation(r: &mut rng::SimRng, n: usize) -> f64 {
    let w2: Vec<f64> = (0..n).map(|_| rng::standard_normal(r).powi(2)).collect();
    let total: f64 = w2.iter().sum();
    let mut acc = 0.0;
    let mut worst: f64 = 0.0;
    for (i, v) in w2.iter().enumerate() {
        acc += v;
        worst = worst.max((acc / total - (i + 1) as f64 / n as f64).abs());
    }
    worst
}

fn main() {
    let mut keys: Vec<usize> = (1..=100).collect();
    keys.extend((110..=200).step_by(10));
    keys.extend([250, 300, 400, 500, 750, 1000]);

    println!("# Half-widths c0 of the CUSUM-of-squares band S_r = r/n +- c0.");
    println!("# Simulated: {REPS} replications per row of n = 2(m + 1) i.i.d. N(0,1)");
    println!("# recursive residuals; c0 is the (1 - alpha) quantile (type 7) of");
    println!("# max_r |S_r - r/n|, so alpha is the total two-sided crossing probability.");
    println!("# Generator: examples/gen_cusumsq_table.rs, base seed {SEED}, {}.", rng::ALGORITHM);
    println!("# Rows are keyed by m = n/2 - 1 and interpolated linearly in m.");
    println!("# version 1");
    println!("#");
    println!("# m n {}", ALPHAS.map(|a| a.1).join(" "));
    for (row, &m) in keys.iter().enumerate() {
        let n = 2 * (m + 1);
        let mut d: Vec<f64> = (0..REPS)
            .into_par_iter()
            .map(|i| {
                let mut r = rng::stream(SEED + row as u64, i as u64);
                max_deviation(&mut r, n)
            })
            .collect();
        d.sort_by(f64::total_cmp);
        let q: Vec<String> = ALPHAS.iter().map(|(a, _)| format!("{:.5}", quantile_sorted(&d, 1.0 - a))).collect();
        println!("{m} {n} {}", q.join(" "));
    }
}
