//! Scale an instance up with nested chains and watch nothing change.
//!
//! Each rectangle becomes t near-copies ordered by the projection order; the
//! dual VC-dimension and the exact minimum net size survive the blow-up while
//! the family triples.
//!
//! ```sh
//! cargo run --release --example blowup_chains
//! ```

use epsnet::construction::{build_family, dual_space_over_grid, precedes};
use epsnet::rational::Rational;
use epsnet::solver::{min_epsilon_net, DEFAULT_NODE_BUDGET};

fn main() {
    let family = build_family(4, 2).unwrap();
    let eps = Rational::pow(2, -7);
    let base = min_epsilon_net(&family.dual_space().unwrap(), &eps, DEFAULT_NODE_BUDGET).unwrap();
    println!(
        "base family: {} rectangles, minimum net {}",
        family.len(),
        base.size
    );

    let t = 3;
    let blown = family.chain_blowup(t).unwrap();
    println!("blow-up t={t}: {} rectangles", blown.len());

    let ordered = blown
        .chunks(t)
        .all(|chain| chain.windows(2).all(|w| precedes(&w[0], &w[1])));
    println!("every chain is ordered by the projection order: {ordered}");

    let witness = &family.witness_points()[0];
    let base_depth = family
        .rects()
        .iter()
        .filter(|r| r.contains(witness))
        .count();
    let blown_depth = blown.iter().filter(|r| r.contains(witness)).count();
    println!(
        "witness {:?}: depth {} -> {} (exactly x{t})",
        witness, base_depth, blown_depth
    );

    let dual = dual_space_over_grid(&blown, 4, 2).unwrap();
    let result = min_epsilon_net(&dual, &eps, DEFAULT_NODE_BUDGET).unwrap();
    println!(
        "blown dual: VC-dimension {}, minimum net {} (unchanged: {})",
        dual.vc_dimension(4),
        result.size,
        result.size == base.size
    );
}
