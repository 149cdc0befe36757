//! From planar rectangles to 4-space points, corner boxes, and half-spaces.
//!
//! Maps each closed rectangle [x1,x2]x[y1,y2] to (x1, 1/x2, y1, 1/y2) and
//! each query point to an origin-cornered box, checks the incidence
//! equivalence on random pairs, then rescales and replaces the boxes by
//! half-spaces without losing a single incidence.
//!
//! ```sh
//! cargo run --release --example box_halfspace_duality
//! ```

use epsnet::construction::build_family;
use epsnet::duality::{check_random_incidences, halfspace_incidence_space, theorem3_instance};
use epsnet::instance::InstanceFile;
use epsnet::rational::Rational;
use epsnet::solver::{min_epsilon_net, DEFAULT_NODE_BUDGET};

fn main() {
    match check_random_incidences(10_000, 7) {
        Ok(()) => println!("10000 random (rectangle, query) pairs: q in R <=> p(R) in B(q)"),
        Err(counterexample) => println!("counterexample found: {counterexample:?}"),
    }

    let inst = InstanceFile::pat(4, 2).unwrap();
    let rect_dual = inst.to_range_space().unwrap();
    let box_space = inst.dual4_from().unwrap().to_range_space().unwrap();
    println!(
        "box space of the shifted family matches its rectangle dual: {}",
        rect_dual.ranges() == box_space.ranges()
    );

    let family = build_family(4, 2).unwrap();
    let hs = theorem3_instance(&family).unwrap();
    println!(
        "half-space instance: {} points in 4-space, {} distinct half-spaces",
        hs.points.len(),
        hs.halfspaces.len()
    );
    let space = halfspace_incidence_space(&hs.points, &hs.halfspaces).unwrap();
    println!(
        "half-space range space: VC-dimension {}, hyperedges match the dual: {}",
        space.vc_dimension(4),
        space.ranges() == rect_dual.ranges()
    );

    let eps = Rational::pow(2, -7);
    let a = min_epsilon_net(&rect_dual, &eps, DEFAULT_NODE_BUDGET).unwrap();
    let b = min_epsilon_net(&space, &eps, DEFAULT_NODE_BUDGET).unwrap();
    println!(
        "minimum eps-net at eps = {eps}: rectangles {}, half-spaces {}",
        a.size, b.size
    );
}
