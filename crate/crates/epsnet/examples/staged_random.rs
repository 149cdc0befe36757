//! The staged random construction, stage by stage.
//!
//! Draws a point set digit by digit, partitions it by truncations, carves
//! intervals against a candidate set of half the points, classifies them,
//! estimates failure and survival probabilities, and exhibits one forced
//! witness rectangle.
//!
//! ```sh
//! cargo run --release --example staged_random
//! ```

use epsnet::staged::{
    classify_and_count, interval_failure_frequency, stage_limit, survival_estimate, StagedPointSet,
};

fn main() {
    let (n, r, seed) = (256usize, 2usize, 11u64);
    let set: Vec<usize> = (0..n / 2).collect();
    let mut in_set = vec![false; n];
    for &i in &set {
        in_set[i] = true;
    }
    let stages = stage_limit(n, r);
    println!("n = {n}, r = {r}, |I| = {}: {stages} stages", set.len());

    let points = StagedPointSet::sample(n, stages, seed);
    for t in 1..=stages {
        let stage = points.carve_stage(t, &in_set, r).unwrap();
        let counts = classify_and_count(&stage, set.len(), r, n);
        println!(
            "stage {t}: {} parts, {} intervals ({} good, {} bad), inequalities hold: {}",
            stage.parts.len(),
            counts.total,
            counts.good,
            counts.bad,
            counts.checks.map(|c| c.all()).unwrap_or(false)
        );
    }

    let stage1 = points.carve_stage(1, &in_set, r).unwrap();
    let interval = stage1.intervals.iter().find(|g| g.is_good(r)).unwrap();
    let trials = 100_000;
    let freq = interval_failure_frequency(&points, interval, &in_set, 1, trials, 5);
    println!(
        "a good interval of size {}: failure frequency {freq:.5} over {trials} trials (expected {:.5})",
        interval.members.len(),
        0.5f64.powi(interval.members.len() as i32)
    );

    let mut forced = points.clone();
    forced.force_failure(interval, &in_set, 1);
    let rect = forced.witness_rectangle(interval, 1);
    let inside: Vec<usize> = (0..n)
        .filter(|&i| rect.contains(&forced.point(i)))
        .collect();
    println!(
        "forced failure: witness rectangle {:?} holds exactly {:?} (all outside the candidate set)",
        rect, inside
    );

    let report = survival_estimate(n, r, &set, 2_000, seed).unwrap();
    println!(
        "survival over {} trials: {:.5} (analytic bound {:.5} per stage, {:.5} overall)",
        report.trials,
        report.survival_frequency,
        report.analytic_stage_bound,
        report.analytic_all_stages_bound
    );
}
