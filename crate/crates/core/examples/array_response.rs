//! Steering vectors of a square planar array and their mutual coherence.

use hybridsim::channel::{array_response, ArrayGeometry};

fn main() {
    let geom = ArrayGeometry::new(8);
    let a = array_response(&geom, 0.3, 1.1);
    println!("{} elements, norm {:.15}", geom.elements(), a.norm());

    // coherence falls off as the azimuth separates
    for delta in [0.0, 0.05, 0.1, 0.2, 0.4] {
        let b = array_response(&geom, 0.3 + delta, 1.1);
        println!("delta az {delta:>4}: |a^H b| = {:.4}", a.dotc(&b).norm());
    }
}
