//! Desk-scale instances of the random planar construction.
//!
//! Builds the window range space of a sampled point set, computes the exact
//! minimum epsilon-net at eps = r/n, and shows random half-sized candidate
//! sets failing when the instance beats them.
//!
//! ```sh
//! cargo run --release --example dyadic_nets
//! ```

use epsnet::rangespace::NetVerdict;
use epsnet::rational::Rational;
use epsnet::solver::{min_epsilon_net, DEFAULT_NODE_BUDGET};
use epsnet::staged::theorem4_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (n, r, seed) = (32usize, 2usize, 1u64);
    let (points, space) = theorem4_instance(n, r, seed).unwrap();
    let eps = Rational::from(r) / Rational::from(n);
    println!(
        "sampled {n} points over {} stages; {} window hyperedges at m = {r}",
        points.stages(),
        space.ranges().len()
    );

    let exact = min_epsilon_net(&space, &eps, DEFAULT_NODE_BUDGET).unwrap();
    println!(
        "exact minimum eps-net at eps = {eps}: {} of {n} points (half would be {})",
        exact.size,
        n / 2
    );

    if exact.size > n / 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 200;
        let mut failures = 0;
        for _ in 0..trials {
            let candidate: Vec<u32> = rand::seq::index::sample(&mut rng, n, n / 2)
                .into_iter()
                .map(|i| i as u32)
                .collect();
            if matches!(
                space.is_epsilon_net(&eps, &candidate),
                NetVerdict::Violated(_)
            ) {
                failures += 1;
            }
        }
        println!(
            "random candidates of size {}: {failures}/{trials} fail (all must)",
            n / 2
        );
    }

    let (_, singles) = theorem4_instance(n, 1, seed).unwrap();
    let eps1 = Rational::new(1, n as i64);
    let all = min_epsilon_net(&singles, &eps1, DEFAULT_NODE_BUDGET).unwrap();
    println!(
        "with r = 1 every point is isolable by a dyadic column: minimum net {} = n",
        all.size
    );
}
