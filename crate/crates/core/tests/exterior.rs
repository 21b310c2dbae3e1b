use num_traits::ToPrimitive;
use wforms_core::exact::{binomial, int, rat, Rational};
use wforms_core::exterior::{
    clifford_identities_hold, epsilon_matrix, iota_matrix, leading_symbol_f,
    leading_symbol_is_involution, trace_pair, trace_pair_binomial, FormBasis,
};
use wforms_core::RationalSymbol;

/// Fermionic oracle: on the full exterior algebra (dimension 2ⁿ, basis bit
/// masks), `ε_i = (Π_{j<i} Z_j) a†_i`. Returns the dense f64 matrix of
/// `ε_ξ` on all degrees at once.
fn jordan_wigner_wedge(n: usize, xi: &[f64]) -> Vec<Vec<f64>> {
    let dim = 1usize << n;
    let mut m = vec![vec![0.0; dim]; dim];
    for src in 0..dim {
        for (i, &x) in xi.iter().enumerate() {
            if src & (1 << i) != 0 {
                continue;
            }
            let below = (src & ((1 << i) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            m[src | (1 << i)][src] += sign * x;
        }
    }
    m
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// `tr(σ(ξ)σ(η))` restricted to middle-degree forms, via the fermionic oracle.
fn oracle_psi(n: usize, xi: &[f64], eta: &[f64]) -> f64 {
    let sigma = |v: &[f64]| {
        let e = jordan_wigner_wedge(n, v);
        let i = transpose(&e);
        let ei = matmul(&e, &i);
        let ie = matmul(&i, &e);
        let rho: f64 = v.iter().map(|x| x * x).sum();
        let dim = e.len();
        (0..dim)
            .map(|r| (0..dim).map(|c| (ei[r][c] - ie[r][c]) / rho).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let p = matmul(&sigma(xi), &sigma(eta));
    (0..(1usize << n))
        .filter(|s| s.count_ones() as usize == n / 2)
        .map(|s| p[s][s])
        .sum()
}

fn sample_points(n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    (0..4)
        .map(|s| {
            let xi: Vec<f64> = (0..n).map(|i| ((i * 7 + s * 3) % 5) as f64 - 1.5).collect();
            let eta: Vec<f64> = (0..n).map(|i| ((i * 3 + s * 5) % 7) as f64 - 2.5).collect();
            (xi, eta)
        })
        .collect()
}

#[test]
fn trace_constants_match_fermionic_oracle() {
    for n in [2usize, 4, 6] {
        let (a, b) = trace_pair(n).unwrap();
        let (a, b) = (a.to_f64().unwrap(), b.to_f64().unwrap());
        for (xi, eta) in sample_points(n) {
            let dot: f64 = xi.iter().zip(&eta).map(|(x, y)| x * y).sum();
            let nx: f64 = xi.iter().map(|x| x * x).sum();
            let ny: f64 = eta.iter().map(|x| x * x).sum();
            let model = a * dot * dot / (nx * ny) + b;
            let oracle = oracle_psi(n, &xi, &eta);
            assert!((model - oracle).abs() < 1e-9, "n={n}: {model} vs {oracle}");
        }
    }
}

#[test]
fn trace_constant_values() {
    assert_eq!(trace_pair(2).unwrap(), (int(4), int(-2)));
    assert_eq!(trace_pair(4).unwrap(), (int(8), int(-2)));
    assert_eq!(trace_pair(6).unwrap(), (int(24), int(-4)));
}

#[test]
fn trace_constants_match_binomial_formula_and_trace_of_identity() {
    for n in [2usize, 4, 6, 8] {
        let (a, b) = trace_pair(n).unwrap();
        assert_eq!((a.clone(), b.clone()), trace_pair_binomial(n), "n={n}");
        let total = Rational::from_integer(binomial(n as i64, n as i64 / 2));
        assert_eq!(a + b, total);
    }
}

#[test]
fn wedge_matches_fermionic_oracle_entrywise() {
    let n = 4;
    let xi = [1.0, -2.0, 3.0, 0.5];
    let jw = jordan_wigner_wedge(n, &xi);
    let xr: Vec<Rational> = [int(1), int(-2), int(3), rat(1, 2)].to_vec();
    for k in 0..n {
        let e = epsilon_matrix(n, k).unwrap();
        let src = FormBasis::new(n, k);
        let dst = FormBasis::new(n, k + 1);
        let mask = |s: &[u8]| s.iter().fold(0usize, |m, &i| m | (1 << i));
        for c in 0..src.len() {
            for r in 0..dst.len() {
                let v = e.entry(r, c).eval(&xr).to_f64().unwrap();
                let o = jw[mask(dst.subset(r))][mask(src.subset(c))];
                assert!((v - o).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn wedge_on_functions_in_dimension_two() {
    let e = epsilon_matrix(2, 0).unwrap();
    assert_eq!((e.rows(), e.cols()), (2, 1));
    assert!(e.entry(0, 0).symbol_eq(&RationalSymbol::xi(2, 0)));
    assert!(e.entry(1, 0).symbol_eq(&RationalSymbol::xi(2, 1)));
}

#[test]
fn contraction_of_one_forms_in_dimension_two() {
    let i = iota_matrix(2, 1).unwrap();
    assert_eq!((i.rows(), i.cols()), (1, 2));
    assert!(i.entry(0, 0).symbol_eq(&RationalSymbol::xi(2, 0)));
    assert!(i.entry(0, 1).symbol_eq(&RationalSymbol::xi(2, 1)));
}

#[test]
fn wedge_on_three_forms_in_dimension_six_has_three_entries_per_column() {
    let e = epsilon_matrix(6, 3).unwrap();
    assert_eq!((e.rows(), e.cols()), (15, 20));
    for c in 0..20 {
        let nonzero = (0..15).filter(|&r| !e.entry(r, c).is_zero()).count();
        assert_eq!(nonzero, 3);
    }
}

#[test]
fn contraction_on_two_forms_is_transpose_of_wedge() {
    let i = iota_matrix(4, 2).unwrap();
    let e = epsilon_matrix(4, 1).unwrap();
    assert_eq!((i.rows(), i.cols()), (4, 6));
    for r in 0..4 {
        for c in 0..6 {
            assert_eq!(i.entry(r, c), e.entry(c, r));
        }
    }
    // each basis 2-form e^{jk} contracts to ξ_j e^k − ξ_k e^j
    for c in 0..6 {
        let nonzero = (0..4).filter(|&r| !i.entry(r, c).is_zero()).count();
        assert_eq!(nonzero, 2);
    }
}

#[test]
fn clifford_identities_for_all_degrees() {
    for n in 1..=8usize {
        for k in 0..=n {
            assert!(clifford_identities_hold(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn leading_symbol_in_dimension_two() {
    let s = leading_symbol_f(2).unwrap();
    let x = RationalSymbol::xi(2, 0);
    let y = RationalSymbol::xi(2, 1);
    let inv = RationalSymbol::inverse_norm_power(2, 1);
    let c = x.mul(&x).sub(&y.mul(&y)).mul(&inv);
    let sn = x.mul(&y).scale(&int(2)).mul(&inv);
    assert!(s.entry(0, 0).symbol_eq(&c));
    assert!(s.entry(0, 1).symbol_eq(&sn));
    assert!(s.entry(1, 0).symbol_eq(&sn));
    assert!(s.entry(1, 1).symbol_eq(&c.scale(&int(-1))));
    assert_eq!(s.homogeneity(), 0);
}

#[test]
fn leading_symbol_is_traceless_involution() {
    for n in [2usize, 4, 6, 8] {
        assert!(leading_symbol_is_involution(n), "n={n}");
    }
}
