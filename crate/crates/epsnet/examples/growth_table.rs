//! Growth table: certified epsilon-net lower bounds per r.
//!
//! Prints the CSV that `epsnet report growth` writes. The normalized column
//! eps * lower_bound grows like r/2: the size of the smallest net outpaces
//! 1/eps by a logarithmic factor.
//!
//! ```sh
//! cargo run --release --example growth_table
//! ```

use epsnet::reports::{growth_csv, growth_table, GrowthModes};
use epsnet::solver::DEFAULT_NODE_BUDGET;

fn main() {
    let rows = growth_table(2, 3, GrowthModes::default(), DEFAULT_NODE_BUDGET, 0)
        .expect("certified range");
    print!("{}", growth_csv(&rows));
    for row in &rows {
        println!(
            "# r = {}: eps = {}, certified lower bound {} via {}, computed in {} ms",
            row.r, row.eps, row.lower_bound, row.certificate, row.millis
        );
    }
}
