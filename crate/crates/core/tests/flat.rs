use wforms_core::calculus::{sigma_minus_n_product, trace_density};
use wforms_core::exact::{int, rat, MultiIndex, Rational};
use wforms_core::flat_residue::{
    display_convention, expand_invariant, ibp_extract, ibp_extract_on_f, integrate_density, omega6_flat_index_form,
    omega6_flat_invariant, omega_flat_direct, omega_flat_taylor, omega_flat_taylor_with,
    CoefficientTable, Convention, InvariantExpression, OperatorTable, Pattern,
};
use wforms_core::sphere::sphere_area_pi_power;

fn unit(n: usize, i: usize) -> MultiIndex {
    MultiIndex::unit(n, i, 1)
}

#[test]
fn dimension_two_table() {
    let t = omega_flat_direct(2).unwrap();
    assert_eq!(t.convention, Convention::Partial);
    assert_eq!(t.len(), 2);
    for i in 0..2 {
        for j in 0..2 {
            let expected = if i == j { int(-4) } else { int(0) };
            assert_eq!(t.get(&unit(2, i), &unit(2, j)), expected);
        }
    }
    let d = t.to_convention(Convention::D);
    assert_eq!(d.get(&unit(2, 0), &unit(2, 0)), int(4));
}

/// Hand expansion in dimension two: with `σ = [[c, s], [s, −c]]`,
/// `c = (ξ₁² − ξ₂²)/|ξ|²`, `s = 2ξ₁ξ₂/|ξ|²` (cos 2θ, sin 2θ on the circle),
/// `tr(∂_iσ ∂_jσ) = 2(∂_i c ∂_j c + ∂_i s ∂_j s) = 8 θ̂_i θ̂_j` on the circle,
/// whose normalized average is `4δ_ij`. Here the same integrand is built from
/// `c` and `s` directly and compared with the materialized trace.
#[test]
fn dimension_two_integrand_matches_hand_expansion() {
    use wforms_core::calculus::SymbolPart;
    use wforms_core::RationalSymbol;
    let n = 2;
    let x = RationalSymbol::xi(n, 0);
    let y = RationalSymbol::xi(n, 1);
    let inv = RationalSymbol::inverse_norm_power(n, 1);
    let c = x.mul(&x).sub(&y.mul(&y)).mul(&inv);
    let s = x.mul(&y).scale(&int(2)).mul(&inv);
    let js = trace_density(&sigma_minus_n_product(2).unwrap())
        .unwrap()
        .materialize()
        .unwrap();
    assert_eq!(js.len(), 4);
    for t in &js.terms {
        let SymbolPart::Scalar(sym) = &t.part else {
            panic!("expected scalar part")
        };
        let i = (0..2).find(|&k| t.jets[0].index[k] == 1).unwrap();
        let j = (0..2).find(|&k| t.jets[1].index[k] == 1).unwrap();
        let hand = c
            .xi_derivative(i)
            .mul(&c.xi_derivative(j))
            .add(&s.xi_derivative(i).mul(&s.xi_derivative(j)))
            .scale(&int(2));
        assert!(sym.symbol_eq(&hand));
    }
    let table = integrate_density(&js).unwrap();
    assert_eq!(table, omega_flat_direct(2).unwrap().to_convention(Convention::D));
}

#[test]
fn dimension_two_matches_polyakov_normalization() {
    // Wres with the unnormalized circle measure is 2π times the normalized
    // one; the Polyakov form −16π² I with I = (1/2π)∫⟨dX,dX⟩ gives −8π.
    let t = omega_flat_direct(2).unwrap();
    let (area, pi_power) = sphere_area_pi_power(2);
    assert_eq!(pi_power, 1);
    assert_eq!(t.get(&unit(2, 0), &unit(2, 0)) * area, int(-8));
}

#[test]
fn routes_agree_in_dimensions_two_and_four() {
    for n in [2usize, 4] {
        let d = omega_flat_direct(n).unwrap();
        let t = omega_flat_taylor(n).unwrap();
        assert!(d.diff(&t).is_empty(), "n={n}: {:?}", d.diff(&t));
    }
}

#[test]
fn routes_agree_in_dimension_six() {
    let d = omega_flat_direct(6).unwrap();
    let t = omega_flat_taylor(6).unwrap();
    assert!(d.diff(&t).is_empty());
    assert!(!d.is_empty());
}

#[test]
fn tables_are_symmetric_with_valid_keys() {
    for n in [2usize, 4, 6] {
        let t = omega_flat_direct(n).unwrap();
        t.validate().unwrap();
        assert!(t.is_symmetric(), "n={n}");
    }
}

#[test]
fn dimension_four_support_and_symmetry() {
    let t = omega_flat_direct(4).unwrap();
    let mut bidegrees: Vec<(u32, u32)> = t.iter().map(|(a, b, _)| (a.order(), b.order())).collect();
    bidegrees.sort();
    bidegrees.dedup();
    assert_eq!(bidegrees, vec![(1, 3), (2, 2), (3, 1)]);
}

#[test]
fn dimension_six_matches_both_displays() {
    let t = omega_flat_direct(6).unwrap();
    let shown = display_convention(&t);
    let second = expand_invariant(&omega6_flat_invariant(), 6).unwrap();
    let first = expand_invariant(&omega6_flat_index_form(), 6).unwrap();
    assert!(shown.diff(&second).is_empty());
    assert!(shown.diff(&first).is_empty());
    // in the ∂ convention the whole table carries (−i)⁶ = −1
    assert!(t.diff(&second.scaled(&int(-1))).is_empty());
}

#[test]
fn constant_part_of_psi_never_contributes() {
    let n = 4;
    let a = int(8);
    let with = omega_flat_taylor_with(n, &a, &int(-2)).unwrap();
    let without = omega_flat_taylor_with(n, &a, &int(0)).unwrap();
    let other = omega_flat_taylor_with(n, &a, &rat(17, 3)).unwrap();
    assert_eq!(with, without);
    assert_eq!(with, other);
}

#[test]
fn inner_product_pattern_in_dimension_two() {
    let e = InvariantExpression::default().term(int(1), 0, Pattern::Inner);
    let t = expand_invariant(&e, 2).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(t.get(&unit(2, 0), &unit(2, 0)), int(1));
    assert_eq!(t.get(&unit(2, 1), &unit(2, 1)), int(1));
}

/// `12Δ²⟨df,dh⟩` checked on polynomial test functions: for `f, h` monomials
/// the bilinear form `Σ A_{a,b} ∂^a f ∂^b h` at the origin is compared with
/// the value obtained by differentiating the product `⟨df,dh⟩` directly.
#[test]
fn laplacian_squared_pattern_on_polynomials() {
    use wforms_core::Poly;
    let n = 6;
    let e = InvariantExpression::default().term(int(12), 2, Pattern::Inner);
    let table = expand_invariant(&e, n).unwrap();
    let lap = |p: &Poly| {
        let mut acc = Poly::zero(n);
        for k in 0..n {
            acc = acc.sub(&p.derivative(k).derivative(k));
        }
        acc
    };
    let monomial = |exps: [u8; 6]| {
        Poly::monomial(exps.iter().copied().collect(), Rational::from_integer(1.into()))
    };
    let cases = [
        ([1, 2, 0, 0, 0, 0], [1, 0, 2, 0, 0, 0]),
        ([2, 0, 0, 1, 0, 0], [0, 0, 0, 1, 2, 0]),
        ([1, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 4]),
        ([0, 3, 0, 0, 0, 0], [0, 1, 2, 0, 0, 0]),
    ];
    let zero = vec![Rational::from_integer(0.into()); n];
    for (fe, he) in cases {
        let f = monomial(fe);
        let h = monomial(he);
        let mut inner = Poly::zero(n);
        for k in 0..n {
            inner = inner.add(&f.derivative(k).mul(&h.derivative(k)));
        }
        let direct = lap(&lap(&inner)).eval(&zero) * int(12);
        let mut via_table = Rational::from_integer(0.into());
        for (a, b, c) in table.iter() {
            let mut fa = f.clone();
            for i in a.to_index_list() {
                fa = fa.derivative(i);
            }
            let mut hb = h.clone();
            for i in b.to_index_list() {
                hb = hb.derivative(i);
            }
            via_table += c * fa.eval(&zero) * hb.eval(&zero);
        }
        assert_eq!(direct, via_table, "f={fe:?} h={he:?}");
    }
}

#[test]
fn unknown_pattern_is_rejected() {
    assert!(Pattern::from_name("bogus").is_err());
}

#[test]
fn integration_by_parts_in_dimension_two() {
    let op = ibp_extract(&omega_flat_direct(2).unwrap());
    // −4⟨df,dh⟩ ↦ f · 4Σ∂²h = f · (−4Δh)
    let lap = OperatorTable::laplacian_power(2, 1);
    assert_eq!(op.proportionality(&lap), Some(int(-4)));
}

#[test]
fn integration_by_parts_in_dimension_four_gives_bilaplacian() {
    let t = omega_flat_direct(4).unwrap();
    let op = ibp_extract(&t);
    let lap2 = OperatorTable::laplacian_power(4, 2);
    let lambda = op.proportionality(&lap2).expect("proportional to the bilaplacian");
    assert_ne!(lambda, int(0));
    // symmetric table: moving derivatives off h instead gives the same operator
    assert_eq!(ibp_extract_on_f(&t), op);
}

#[test]
fn json_round_trip_and_order() {
    let t = omega_flat_direct(4).unwrap();
    let s = t.to_json();
    let back = CoefficientTable::from_json(&s).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.to_json(), s);
    assert!(s.contains("\"convention\": \"partial\""));
    let d = t.to_convention(Convention::D).to_json();
    assert!(d.contains("\"convention\": \"D\""));
}
