//! Property-based invariants for the exact-arithmetic kernel and the
//! coefficient systems: exactness, canonical forms, solver agreement with
//! dense elimination, residue conventions, and linearity in the deformation
//! direction.

use proptest::prelude::*;

use painlax_core::algebra::{
    dense_solve, toeplitz_unit_inverse_coeffs, vandermonde_solve, varset, HalfSeries, MultiPoly,
    Rat, RatFunc, UniPoly,
};
use painlax_core::connection::IrregularTimes;
use painlax_core::deformation::{
    c_coefficients, general_hamiltonian, mu_coefficients, nu_coefficients, DeformationVector,
};
use painlax_core::oper::{lagrange_interpolant, Chart};

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat_strategy().prop_filter("nonzero", |r| !r.is_zero())
}

proptest! {
    #[test]
    fn rational_arithmetic_is_exact(a in rat_strategy(), b in rat_strategy()) {
        let sum = &a + &b;
        prop_assert_eq!(&sum - &b, a.clone());
        if !b.is_zero() {
            let prod = &a * &b;
            prop_assert_eq!(&prod / &b, a);
        }
    }

    #[test]
    fn ratfunc_stays_canonical(
        n1 in proptest::collection::vec(rat_strategy(), 1..4),
        d1 in proptest::collection::vec(rat_strategy(), 1..4),
        n2 in proptest::collection::vec(rat_strategy(), 1..4),
    ) {
        let num1 = UniPoly::from_coeffs(n1);
        let mut den1 = UniPoly::from_coeffs(d1);
        if den1.is_zero() {
            den1 = UniPoly::one();
        }
        let num2 = UniPoly::from_coeffs(n2);
        let a = RatFunc::new(num1, den1.clone());
        let b = RatFunc::new(num2, den1);
        for rf in [&(&a + &b), &(&a * &b), &(&a - &b)] {
            if !rf.is_zero() {
                prop_assert!(rf.denom().is_monic());
                prop_assert_eq!(rf.numer().gcd(rf.denom()).degree(), Some(0));
            }
        }
    }

    #[test]
    fn series_sqrt_squares_back(
        lead in 1i64..=9,
        tail in proptest::collection::vec(rat_strategy(), 0..5),
        top in 0i64..=4,
    ) {
        // a series with perfect-square leading coefficient at an even
        // doubled exponent
        let mut s = HalfSeries::monomial(Rat::from_int(lead * lead), 2 * top);
        for (i, c) in tail.iter().enumerate() {
            s = s.add(&HalfSeries::monomial(c.clone(), 2 * top - 1 - i as i64));
        }
        let order = 2 * top - 12;
        let root = s.sqrt(order).unwrap();
        prop_assert!(root.mul(&root).agrees_with(&s));
    }

    #[test]
    fn residue_is_linear_and_supported_on_one_power(
        exps in proptest::collection::vec((-8i64..=8, rat_strategy()), 0..6),
        a in rat_strategy(),
        b in rat_strategy(),
    ) {
        let mut s1 = HalfSeries::zero();
        let mut s2 = HalfSeries::zero();
        for (i, (e, c)) in exps.iter().enumerate() {
            if i % 2 == 0 {
                s1 = s1.add(&HalfSeries::monomial(c.clone(), *e));
            } else {
                s2 = s2.add(&HalfSeries::monomial(c.clone(), *e));
            }
        }
        let lin = s1.scale(&a).add(&s2.scale(&b)).residue_at_infinity().unwrap();
        let parts = &(&a * &s1.residue_at_infinity().unwrap())
            + &(&b * &s2.residue_at_infinity().unwrap());
        prop_assert_eq!(lin, parts);
        // only λ^(−1) contributes
        for e in -6i64..=6 {
            let r = HalfSeries::monomial(Rat::one(), e).residue_at_infinity().unwrap();
            if e == -2 {
                prop_assert_eq!(r, Rat::from_int(-2));
            } else {
                prop_assert!(r.is_zero());
            }
        }
    }

    #[test]
    fn toeplitz_unit_inverse_matches_dense(
        taus in proptest::collection::vec(rat_strategy(), 1..8),
    ) {
        let f = toeplitz_unit_inverse_coeffs(&taus);
        let n = taus.len();
        let dim = n + 2;
        let mut m = vec![vec![Rat::zero(); dim]; dim];
        for i in 0..dim {
            m[i][i] = Rat::one();
            for j in 0..i {
                if i - j >= 2 {
                    m[i][j] = taus[i - j - 2].clone();
                }
            }
        }
        let mut e1 = vec![Rat::zero(); dim];
        e1[0] = Rat::one();
        let x = dense_solve(&m, &e1).unwrap();
        for i in 0..n {
            prop_assert_eq!(&x[i + 2], &f[i]);
        }
    }

    #[test]
    fn vandermonde_matches_dense(
        nodes in proptest::collection::vec(rat_strategy(), 1..8)
            .prop_filter("distinct", |v| {
                for i in 0..v.len() {
                    for j in (i + 1)..v.len() {
                        if v[i] == v[j] {
                            return false;
                        }
                    }
                }
                true
            }),
        seedrhs in proptest::collection::vec(rat_strategy(), 8),
        transposed in proptest::bool::ANY,
    ) {
        let n = nodes.len();
        let rhs = &seedrhs[..n];
        let x = vandermonde_solve(&nodes, rhs, transposed).unwrap();
        let mut v = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                v[i][j] = if transposed {
                    nodes[i].pow(j as i64)
                } else {
                    nodes[j].pow(i as i64)
                };
            }
        }
        let dense = dense_solve(&v, rhs).unwrap();
        prop_assert_eq!(x, dense);
    }

    #[test]
    fn multipoly_integrate_then_differentiate(
        terms in proptest::collection::vec(
            ((0u32..4, 0u32..4, 0u32..4), rat_strategy()),
            0..8,
        ),
    ) {
        let vars = varset(&["x", "y", "z"]);
        let mut p = MultiPoly::zero(&vars);
        for ((a, b, c), coeff) in terms {
            let mono = MultiPoly::constant(&vars, coeff)
                .mul(&pow_var(&vars, "x", a))
                .mul(&pow_var(&vars, "y", b))
                .mul(&pow_var(&vars, "z", c));
            p = p.add(&mono);
        }
        for v in ["x", "y", "z"] {
            prop_assert_eq!(p.integrate(v).partial(v), p.clone());
        }
    }

    #[test]
    fn lagrange_defining_property(
        q in proptest::collection::vec(rat_strategy(), 1..5)
            .prop_filter("distinct", |v| {
                for i in 0..v.len() {
                    for j in (i + 1)..v.len() {
                        if v[i] == v[j] {
                            return false;
                        }
                    }
                }
                true
            }),
        seedp in proptest::collection::vec(rat_strategy(), 5),
    ) {
        let p = &seedp[..q.len()];
        let poly = lagrange_interpolant(&q, p).unwrap();
        for (qi, pi) in q.iter().zip(p) {
            prop_assert_eq!(&poly.eval(qi) + pi, Rat::zero());
        }
        if let Some(d) = poly.degree() {
            prop_assert!(d + 1 < q.len() + 1);
        }
    }

    #[test]
    fn deformation_data_linear_in_direction(
        s1 in nonzero_rat(),
        s2 in nonzero_rat(),
        k1 in 1usize..=8,
        k2 in 1usize..=8,
    ) {
        let r = 5usize;
        let times = IrregularTimes::canonical(
            r,
            &[Rat::new(1, 2), Rat::from_int(-2)],
            Rat::one(),
        ).unwrap();
        let chart = Chart::qp(
            vec![Rat::from_int(1), Rat::from_int(-2)],
            vec![Rat::from_int(3), Rat::new(1, 3)],
        ).unwrap();
        let a1 = DeformationVector::basis(r, k1);
        let a2 = DeformationVector::basis(r, k2);
        let combo = a1.scale(&s1).add(&a2.scale(&s2));
        let nu_combo = nu_coefficients(&combo, &times).unwrap();
        let nu1 = nu_coefficients(&a1, &times).unwrap();
        let nu2 = nu_coefficients(&a2, &times).unwrap();
        for i in 0..nu_combo.len() {
            prop_assert_eq!(
                &nu_combo[i],
                &(&(&s1 * &nu1[i]) + &(&s2 * &nu2[i]))
            );
        }
        let c_combo = c_coefficients(&combo, &times).unwrap();
        let c1 = c_coefficients(&a1, &times).unwrap();
        let c2 = c_coefficients(&a2, &times).unwrap();
        for i in 0..c_combo.len() {
            prop_assert_eq!(&c_combo[i], &(&(&s1 * &c1[i]) + &(&s2 * &c2[i])));
        }
        let (mu_combo, rho_combo) = mu_coefficients(&nu_combo, &chart).unwrap();
        let (mu1, _) = mu_coefficients(&nu1, &chart).unwrap();
        let (mu2, _) = mu_coefficients(&nu2, &chart).unwrap();
        for j in 0..mu_combo.len() {
            prop_assert_eq!(
                &mu_combo[j],
                &(&(&s1 * &mu1[j]) + &(&s2 * &mu2[j]))
            );
            prop_assert_eq!(
                &rho_combo[j],
                &(-&(&mu_combo[j] * &chart.p()[j]))
            );
        }
        let h_combo = general_hamiltonian(&combo, &chart, &times).unwrap();
        let h1 = general_hamiltonian(&a1, &chart, &times).unwrap();
        let h2 = general_hamiltonian(&a2, &chart, &times).unwrap();
        prop_assert_eq!(h_combo, &(&s1 * &h1) + &(&s2 * &h2));
    }
}

fn pow_var(vars: &painlax_core::algebra::VarSet, name: &str, e: u32) -> MultiPoly {
    let mut p = MultiPoly::constant(vars, Rat::one());
    for _ in 0..e {
        p = p.mul(&MultiPoly::var(vars, name));
    }
    p
}
