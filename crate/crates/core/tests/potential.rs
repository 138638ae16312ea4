// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use epidemetric::electrical::{
    divergence, effective_resistance_grounded, energy, incidence, laplacian, Orientation, SpectralLaplacian,
};
use epidemetric::epidemic::{epidemic, epidemic_density};
use epidemetric::generators::{complete, random_connected, Corpus};
use epidemetric::variational::{
    capacitary_function, capacity, epidemic_modulus_bound, gradient, harmonic_extension, is_admissible, modulus,
    modulus_bruteforce, rho_distances, BoundaryProblem, EdgeDensity,
};
use epidemetric::Graph;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<Graph> {
    Corpus::default().graphs()
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn weight_matrix(g: &Graph) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(g.weights()))
}

#[test]
fn laplacian_factorizes() {
    for g in corpus() {
        let l = laplacian(&g);
        let b = incidence(&g, &Orientation::canonical(&g));
        assert!((b.transpose() * weight_matrix(&g) * &b - &l).abs().max() < 1e-12);
        for i in 0..g.n() {
            assert!(l.row(i).sum().abs() < 1e-12);
        }
    }
}

#[test]
fn spectral_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in corpus() {
        let n = g.n();
        let s = SpectralLaplacian::new(&g).unwrap();
        let lam = s.eigenvalues();
        let top = lam[n - 1];
        assert!(lam[0].abs() <= 1e-9 * top);
        assert!(lam[1] > 1e-9 * top);
        assert_eq!(s.kernel_dim(), 1);
        let u0 = s.eigenvectors().column(0);
        let c = 1.0 / (n as f64).sqrt();
        assert!(u0.iter().all(|x| (x.abs() - c).abs() < 1e-9));
        let l = laplacian(&g);
        let projector = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        assert!((s.green() * &l - &projector).abs().max() < 1e-8);
        assert!((&l * s.green() - &projector).abs().max() < 1e-8);
        for _ in 0..5 {
            let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let quad = (v.transpose() * &l * &v)[(0, 0)];
            let by_edges: f64 = g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(x, y))| g.weight(e) * (v[x] - v[y]).powi(2))
                .sum();
            assert!((quad - by_edges).abs() < 1e-9);
            assert!(quad >= -1e-12);
        }
    }
}

#[test]
fn complete_graph_spectrum() {
    // L = N·I - J, so every vector orthogonal to the constants is an
    // eigenvector for N
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 3..=6 {
        let g = complete(n).unwrap();
        let s = SpectralLaplacian::new(&g).unwrap();
        assert!(s.eigenvalues()[0].abs() < 1e-12);
        for k in 1..n {
            assert!((s.eigenvalues()[k] - n as f64).abs() < 1e-12);
        }
        let mut u = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let mean = u.mean();
        u.add_scalar_mut(-mean);
        assert!((laplacian(&g) * &u - &u * n as f64).abs().max() < 1e-12);
    }
}

#[test]
fn resistance_metric_and_bounds() {
    for g in corpus() {
        let r = SpectralLaplacian::new(&g).unwrap().resistance_matrix();
        let d = g.all_distances();
        for x in g.vertices() {
            assert_eq!(r.get(x, x), 0.0);
            for y in g.vertices() {
                assert!((r.get(x, y) - r.get(y, x)).abs() < 1e-12);
                if x != y {
                    assert!(r.get(x, y) > 0.0);
                }
                for z in g.vertices() {
                    assert!(r.get(x, z) <= r.get(x, y) + r.get(y, z) + 1e-8);
                }
            }
        }
        // domination needs unit conductances: R_eff <= d_G is about W0
        let ru = SpectralLaplacian::new(&g.unweighted()).unwrap().resistance_matrix();
        for x in g.vertices() {
            for y in g.vertices() {
                assert!(ru.get(x, y) <= d[x][y] as f64 + 1e-9);
            }
        }
    }
}

#[test]
fn trees_resistance_is_distance() {
    for t in (Corpus { count: 20, ..Corpus::default() }).trees() {
        let r = SpectralLaplacian::new(&t).unwrap().resistance_matrix();
        let d = t.all_distances();
        for x in t.vertices() {
            for y in t.vertices() {
                assert!((r.get(x, y) - d[x][y] as f64).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn rayleigh_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in corpus() {
        let before = SpectralLaplacian::new(&g).unwrap().resistance_matrix();
        for _ in 0..10 {
            let e = rng.gen_range(0..g.m());
            let lowered = g.with_edge_weight(e, g.weight(e) * rng.gen_range(0.05..0.95)).unwrap();
            let after = SpectralLaplacian::new(&lowered).unwrap().resistance_matrix();
            for a in g.vertices() {
                for b in g.vertices() {
                    assert!(after.get(a, b) >= before.get(a, b) - 1e-9);
                }
            }
        }
    }
}

/// Projects an edge vector onto the cycle space (divergence-free flows).
fn circulation(g: &Graph, z: &DVector<f64>) -> DVector<f64> {
    let b = incidence(g, &Orientation::canonical(g));
    let btb = b.transpose() * &b;
    let pinv = btb.pseudo_inverse(1e-10).unwrap();
    z - &b * pinv * b.transpose() * z
}

#[test]
fn current_flow_laws_and_thomson() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for g in corpus() {
        let s = SpectralLaplacian::new(&g).unwrap();
        let b_mat = incidence(&g, &Orientation::canonical(&g));
        for _ in 0..4 {
            let a = rng.gen_range(0..g.n());
            let b = (a + rng.gen_range(1..g.n())) % g.n();
            let flow = s.unit_current_flow(&g, a, b).unwrap();
            let v = &flow.potential;
            for (e, &(tail, head)) in g.edges().iter().enumerate() {
                assert!((flow.current[e] * g.resistance(e) - (v[head] - v[tail])).abs() < 1e-9);
            }
            let i = DVector::from_column_slice(&flow.current);
            let bti = b_mat.transpose() * &i;
            for x in g.vertices() {
                let eta = if x == a { -1.0 } else if x == b { 1.0 } else { 0.0 };
                assert!((bti[x] - eta).abs() < 1e-9);
                let expected_div = -eta;
                assert!((divergence(&g, &flow.current, x) - expected_div).abs() < 1e-9);
            }
            assert!((flow.strength - 1.0).abs() < 1e-9);
            assert!(v.iter().sum::<f64>().abs() < 1e-9);

            let reff = s.effective_resistance(a, b);
            let grounded = effective_resistance_grounded(&g, a, b).unwrap();
            let e_i = energy(&g, &flow.current);
            assert!(rel(grounded, reff) < 1e-8 && rel(e_i, reff) < 1e-8);
            assert!((flow.voltage_drop() - reff).abs() < 1e-9);

            // random flows k from a to b: strength t plus a circulation
            let z = DVector::from_fn(g.m(), |_, _| rng.gen_range(-1.0..1.0));
            let c = circulation(&g, &z);
            for t in [1.0, -0.5, 2.5] {
                let k: Vec<f64> = (0..g.m()).map(|e| t * flow.current[e] + c[e]).collect();
                let cross: f64 = (0..g.m()).map(|e| g.resistance(e) * flow.current[e] * k[e]).sum();
                let div_a = divergence(&g, &k, a);
                assert!((div_a - t).abs() < 1e-9);
                assert!((cross - flow.voltage_drop() * div_a).abs() < 1e-9);
            }
            let unit_other: Vec<f64> = (0..g.m()).map(|e| flow.current[e] + c[e]).collect();
            assert!(energy(&g, &unit_other) >= e_i - 1e-12);
        }
    }
}

#[test]
fn orientation_flip_keeps_laplacian() {
    for g in corpus().iter().take(10) {
        let o = Orientation::canonical(g);
        let w = weight_matrix(g);
        let b = incidence(g, &o);
        let flipped = incidence(g, &o.flipped(g.m() / 2));
        assert_eq!(b.transpose() * &w * &b, flipped.transpose() * &w * &flipped);
    }
}

#[test]
fn modulus_capacity_conductance_agree() {
    for g in corpus() {
        let s = SpectralLaplacian::new(&g).unwrap();
        for a in g.vertices() {
            for b in a + 1..g.n() {
                let cap = capacity(&g, a, b).unwrap();
                let ceff = 1.0 / s.effective_resistance(a, b);
                assert!(rel(modulus(&g, a, b).unwrap(), cap) <= 1e-8);
                assert!(rel(cap, ceff) <= 1e-8);
            }
        }
    }
}

#[test]
fn bruteforce_oracle_on_small_graphs() {
    let small: Vec<Graph> = corpus().into_iter().filter(|g| g.n() <= 8).collect();
    assert!(small.len() >= 10);
    for g in small {
        for a in g.vertices() {
            for b in a + 1..g.n() {
                let bf = modulus_bruteforce(&g, a, b).unwrap();
                let cap = capacity(&g, a, b).unwrap();
                assert!((bf.value - cap).abs() <= 1e-5, "{} vs {cap}", bf.value);
                assert!(bf.lower_bound <= cap + 1e-9);
                assert!(is_admissible(&g, &bf.density, a, b).unwrap().shortest >= 1.0 - 1e-12);
            }
        }
    }
}

#[test]
fn capacitary_function_properties() {
    for g in corpus() {
        let s = SpectralLaplacian::new(&g).unwrap();
        for (a, b) in [(0, g.n() - 1), (1, 0)] {
            let u = capacitary_function(&g, a, b).unwrap();
            let bp = BoundaryProblem::new(&g, &[(a, 0.0), (b, 1.0)]).unwrap();
            let h = harmonic_extension(&g, &bp).unwrap();
            for x in g.vertices() {
                assert!((u[x] - h[x]).abs() < 1e-9);
            }
            let rho_u = gradient(&g, &u);
            let cap = capacity(&g, a, b).unwrap();
            assert!(rel(rho_u.energy(&g), cap) < 1e-9);
            let flow = s.unit_current_flow(&g, a, b).unwrap();
            let reff = s.effective_resistance(a, b);
            // weighted: |i(e)| R(e) is the potential drop across e
            for e in 0..g.m() {
                let expected = flow.current[e].abs() * g.resistance(e) / reff;
                assert!((rho_u.get(e) - expected).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn capacitary_gradient_is_admissible() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let n = rng.gen_range(3..=10);
        let g = random_connected(&mut rng, n, 0.4, Some((0.5, 2.0)));
        let (a, b) = (0, n - 1);
        let rho_u = gradient(&g, &capacitary_function(&g, a, b).unwrap());
        let check = is_admissible(&g, &rho_u, a, b).unwrap();
        assert!(check.admissible, "shortest {}", check.shortest);
        // the shortest curve has length one: the geodesic of U
        assert!((check.shortest - 1.0).abs() < 1e-9);
        let unit = g.unweighted();
        let rho_e = epidemic_density(&unit, a, b).unwrap();
        assert!(is_admissible(&unit, &rho_e, a, b).unwrap().admissible);
    }
}

#[test]
fn maximum_principle() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for g in corpus() {
        for _ in 0..3 {
            let k = rng.gen_range(1..g.n());
            let mut vs: Vec<usize> = g.vertices().collect();
            rand::seq::SliceRandom::shuffle(vs.as_mut_slice(), &mut rng);
            let boundary: Vec<(usize, f64)> = vs[..k].iter().map(|&x| (x, rng.gen_range(-3.0..3.0))).collect();
            let bp = BoundaryProblem::new(&g, &boundary).unwrap();
            let h = harmonic_extension(&g, &bp).unwrap();
            let (lo, hi) = bp.range();
            assert!(h.iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
            assert!(epidemetric::variational::harmonic_residual(&g, &h, &bp.interior()) < 1e-10);
        }
    }
}

#[test]
fn distance_function_contracts_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for g in corpus().into_iter().filter(|g| g.n() <= 10) {
        let (a, b) = (0, g.n() - 1);
        let raw = EdgeDensity::new((0..g.m()).map(|_| rng.gen_range(0.0..2.0)).collect()).unwrap();
        let shortest = rho_distances(&g, &raw, a)[b];
        let rho = raw.scaled(1.0 / shortest);
        let check = is_admissible(&g, &rho, a, b).unwrap();
        assert!(check.admissible && (check.shortest - 1.0).abs() < 1e-9);
        let u = rho_distances(&g, &rho, a);
        assert!(u[a] == 0.0 && (u[b] - 1.0).abs() < 1e-12);
        let grad = gradient(&g, &u);
        for e in 0..g.m() {
            assert!(grad.get(e) <= rho.get(e) + 1e-12);
        }
        assert!(grad.energy(&g) <= rho.energy(&g) + 1e-12);
        assert!(capacity(&g, a, b).unwrap() <= grad.energy(&g) + 1e-9);
        // quadratic scaling
        let t = 3.0;
        assert!((rho.scaled(t).energy(&g) - t * t * rho.energy(&g)).abs() < 1e-9);
    }
}

#[test]
fn epidemic_bounds_modulus() {
    for g in corpus() {
        let unit = g.unweighted();
        for a in unit.vertices() {
            for b in a + 1..unit.n() {
                let bound = epidemic_modulus_bound(&unit, a, b).unwrap();
                assert!(bound.holds && bound.sharper_holds, "{bound:?}");
                assert!(bound.slack >= -1e-9);
                let e = epidemic(&unit, a, b).unwrap();
                let d = e.distance as f64;
                assert!((bound.density_energy - e.union_volume as f64 / (d * d)).abs() < 1e-12);
                let reff = 1.0 / bound.modulus;
                assert!(reff * e.value as f64 / (d * d) >= 1.0 - 1e-9);
            }
        }
    }
}
