//! Three-qubit W' states through the stationary system, compared with the
//! vertex values.

use geoent::closed_form::w_prime_solver;

fn main() -> geoent::Result<()> {
    let s = 3f64.sqrt().recip();
    let draws = [
        [s, s, s],
        [0.8, 0.6, 0.0],
        [0.57, 0.48, 0.6657],
        [0.9, 0.3, 0.3],
    ];
    for raw in draws {
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let c = raw.map(|v| v / norm);
        let sol = w_prime_solver(c[0], c[1], c[2], 0.7, 2.1)?;
        let interior = sol
            .interior
            .as_ref()
            .map(|i| format!("interior {:.6} at a = {:.4?}", i.value, i.a))
            .unwrap_or_else(|| "no interior point".into());
        println!(
            "c = {:.4?}: lambda {:.8}, best vertex {:.6}, {interior}",
            c, sol.result.lambda_max, sol.boundary_value
        );
    }
    Ok(())
}
