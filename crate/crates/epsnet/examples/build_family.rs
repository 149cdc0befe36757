//! Construct a rectangle family and inspect its structure.
//!
//! ```sh
//! cargo run --example build_family
//! ```

use epsnet::construction::{build_family, max_independent_bound};

fn main() {
    let (c, d) = (4u32, 2u32);
    let family = build_family(c, d).expect("valid parameters");
    println!(
        "family({c},{d}): {} rectangles, each of area {}",
        family.len(),
        family.rects()[0].area()
    );
    for rect in family.rects().iter().take(4) {
        let tag = rect.tag.as_ref().unwrap();
        println!("  {:<14} {:?}", tag.label(), rect);
    }
    println!("  ...");

    let groups = family.sibling_groups();
    println!(
        "sibling groups (middle levels only): {} groups of {}",
        groups.len(),
        c
    );

    let dual = family.dual_space().expect("grid fits");
    println!(
        "dual range space: ground {}, {} distinct hyperedges, max depth {}",
        dual.ground_size(),
        dual.ranges().len(),
        dual.ranges().iter().map(|r| r.len()).max().unwrap_or(0)
    );
    println!(
        "no 2-independent subfamily can exceed {}",
        max_independent_bound(c, d, 2).unwrap()
    );
}
