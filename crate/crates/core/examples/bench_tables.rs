use std::time::Instant;
use hardynum::modulus::{graded_radial, log_polar_grid, solve, LogPolarSpec, NodeClass};
use std::f64::consts::PI;

fn main() {
    for grid_h in [1.0/128.0, 1.0/256.0] {
        let s = graded_radial(-12.0, 0.0, grid_h, 0.08, 1.06, false);
        let n_phi = (PI / grid_h).ceil() as usize + 1;
        let spec = LogPolarSpec {
            center: hardynum::Point::new(0.0, 0.0),
            s, phi0: 0.0, phi_span: PI, n_phi, periodic: false,
        };
        let ns = spec.s.len();
        let np = spec.n_phi;
        let theta = PI / 2.0;
        let t0 = Instant::now();
        let problem = log_polar_grid(&spec, &|_| true, &|i, j, _| {
            if i == np - 1 || j == 0 { NodeClass::Zero }
            else if j == ns - 1 && spec.phi(i) <= theta + 1e-9 { NodeClass::One }
            else { NodeClass::Interior }
        }, &[]);
        let t_build = t0.elapsed();
        let t1 = Instant::now();
        let solved = solve(&problem, None).unwrap();
        println!("h=1/{:.0}: nodes={} ns={} build={:.2?} solve={:.2?} iters={} Lambda={:.5}",
            1.0/grid_h, problem.node_count(), ns, t_build, t1.elapsed(), solved.iterations, solved.modulus/2.0);
        // warm-started neighbor solve
        let theta2 = theta - PI/64.0;
        let problem2 = log_polar_grid(&spec, &|_| true, &|i, j, _| {
            if i == np - 1 || j == 0 { NodeClass::Zero }
            else if j == ns - 1 && spec.phi(i) <= theta2 + 1e-9 { NodeClass::One }
            else { NodeClass::Interior }
        }, &[]);
        let t2 = Instant::now();
        let s2 = solve(&problem2, Some(&solved.values)).unwrap();
        println!("   warm neighbor: solve={:.2?} iters={}", t2.elapsed(), s2.iterations);
    }
}
