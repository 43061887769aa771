//! Log expected improvement stays finite where plain EI underflows.

use adascale::acquisition::log_ei;
use adascale::numerics::std_normal_logs;

fn naive_ei(mean: f64, std: f64, best: f64) -> f64 {
    let z = (best - mean) / std;
    let (lpdf, lcdf) = std_normal_logs(z);
    std * (z * lcdf.exp() + lpdf.exp())
}

fn main() {
    println!("{:>6} {:>14} {:>16}", "z", "naive EI", "log EI");
    for z in [3.0, 0.0, -5.0, -10.0, -20.0, -30.0, -40.0] {
        // mean sits z standard deviations above the incumbent (minimization)
        let ei = naive_ei(-z, 1.0, 0.0);
        println!("{z:>6.1} {ei:>14.6e} {:>16.6}", log_ei(-z, 1.0, 0.0));
    }
}
