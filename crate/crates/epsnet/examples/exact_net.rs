//! Certify that small epsilon-nets cannot exist for the hard dual instance.
//!
//! Picks the schedule parameters for eps = 2^-7, builds the family, computes
//! the exact minimum epsilon-net of its dual range space, and then lets 100
//! random undersized candidates fail.
//!
//! ```sh
//! cargo run --release --example exact_net
//! ```

use epsnet::construction::{build_family, theorem1_parameters};
use epsnet::rational::Rational;
use epsnet::reports::falsify_small_nets;
use epsnet::solver::{min_epsilon_net, DEFAULT_NODE_BUDGET};

fn main() {
    let eps = Rational::pow(2, -7);
    let params = theorem1_parameters(&eps).expect("eps below 1/64");
    println!(
        "eps = {eps}: schedule gives r = {}, family parameters ({}, {})",
        params.r, params.c, params.d
    );
    let family = build_family(params.c, params.d).unwrap();
    let dual = family.dual_space().unwrap();
    println!(
        "dual space: {} rectangles, {} hyperedges",
        dual.ground_size(),
        dual.ranges().len()
    );

    let result = min_epsilon_net(&dual, &eps, DEFAULT_NODE_BUDGET).unwrap();
    let half = family.len() / 2;
    println!(
        "exact minimum eps-net: {} rectangles (proved optimal in {} nodes); at least half the family ({half}) was guaranteed",
        result.size, result.nodes_explored
    );

    let undersized = result.size - 1;
    let report = falsify_small_nets(&dual, &eps, undersized, 100, 1).unwrap();
    println!(
        "{} random candidates of size {undersized}: all failed; first witness hyperedge {:?}",
        report.samples, report.witnesses[0].violated_range
    );
}
