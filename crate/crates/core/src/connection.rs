//! The normalized twisted connection: irregular times, the normalized 2×2
//! representative, its spectral curve and eigenvalue expansions, and the
//! extraction of Birkhoff invariants and isospectral Hamiltonians.

use serde::{Deserialize, Serialize};

use crate::algebra::{HalfSeries, Mat2, Rat, RatFunc, UniPoly};
use crate::error::{Error, Result};
use crate::oper::Chart;

/// The irregular times t∞,1 … t∞,2r∞−2 at the pole, plus the deformation
/// scale ħ. The leading odd time t∞,2r∞−3 must be nonzero (non-degenerate
/// twist).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IrregularTimes {
    r_inf: usize,
    t: Vec<Rat>,
    hbar: Rat,
}

impl IrregularTimes {
    pub fn new(r_inf: usize, t: Vec<Rat>, hbar: Rat) -> Result<Self> {
        if r_inf < 3 {
            return Err(Error::InvalidTimes(format!("pole order {r_inf} < 3")));
        }
        if t.len() != 2 * r_inf - 2 {
            return Err(Error::InvalidTimes(format!(
                "expected {} times, got {}",
                2 * r_inf - 2,
                t.len()
            )));
        }
        if t[2 * r_inf - 3 - 1].is_zero() {
            return Err(Error::InvalidTimes(format!(
                "t_{} must be nonzero (degenerate twist rejected)",
                2 * r_inf - 3
            )));
        }
        Ok(IrregularTimes { r_inf, t, hbar })
    }

    /// Canonical slice: even times 0, t∞,2r∞−3 = 2, t∞,2r∞−5 = 0 and the
    /// isomonodromic times entering through ½·t∞,2r∞−2k−5 = τ_k.
    pub fn canonical(r_inf: usize, tau: &[Rat], hbar: Rat) -> Result<Self> {
        if tau.len() != r_inf - 3 {
            return Err(Error::InvalidTimes(format!(
                "expected {} isomonodromic times, got {}",
                r_inf - 3,
                tau.len()
            )));
        }
        let mut t = vec![Rat::zero(); 2 * r_inf - 2];
        t[2 * r_inf - 3 - 1] = Rat::from_int(2);
        for (k, tau_k) in tau.iter().enumerate() {
            // τ_{k+1} = ½ t_{2r∞−2(k+1)−5}
            let idx = 2 * r_inf - 2 * (k + 1) - 5;
            t[idx - 1] = &Rat::from_int(2) * tau_k;
        }
        IrregularTimes::new(r_inf, t, hbar)
    }

    pub fn r_inf(&self) -> usize {
        self.r_inf
    }

    /// Genus of the spectral curve, g = r∞ − 3.
    pub fn genus(&self) -> usize {
        self.r_inf - 3
    }

    pub fn hbar(&self) -> &Rat {
        &self.hbar
    }

    pub fn with_hbar(&self, hbar: Rat) -> Self {
        IrregularTimes {
            r_inf: self.r_inf,
            t: self.t.clone(),
            hbar,
        }
    }

    /// t∞,k for 1 ≤ k ≤ 2r∞−2.
    pub fn t(&self, k: usize) -> &Rat {
        &self.t[k - 1]
    }

    pub fn all(&self) -> &[Rat] {
        &self.t
    }

    /// All even times vanish (traceless representative).
    pub fn is_reduced(&self) -> bool {
        (1..self.r_inf).all(|k| self.t(2 * k).is_zero())
    }

    /// Canonical slice check: reduced, t∞,2r∞−3 = 2, t∞,2r∞−5 = 0.
    pub fn is_canonical_slice(&self) -> bool {
        self.is_reduced()
            && *self.t(2 * self.r_inf - 3) == Rat::from_int(2)
            && self.t(2 * self.r_inf - 5).is_zero()
    }

    /// Isomonodromic times read off a canonical-slice time vector.
    pub fn tau(&self) -> Vec<Rat> {
        (1..=self.genus())
            .map(|k| &Rat::new(1, 2) * self.t(2 * self.r_inf - 2 * k - 5))
            .collect()
    }
}

/// Normalized representative of a twisted connection: a 2×2 matrix of
/// rational functions of λ whose leading blocks at the pole obey the
/// normalization (lower-triangular leading block with diagonal −½t∞,2r∞−2
/// and (2,1)-entry ¼t∞,2r∞−3², subleading block with (1,2)-entry 1 and
/// diagonal −½t∞,2r∞−4).
#[derive(Clone, PartialEq, Debug)]
pub struct TwistedConnection {
    pub entries: Mat2<RatFunc>,
    pub times: IrregularTimes,
    /// coordinates the connection was built from, if any
    pub chart: Option<Chart>,
}

impl TwistedConnection {
    pub fn r_inf(&self) -> usize {
        self.times.r_inf()
    }

    /// Entry (1,2), the monic polynomial whose roots are the apparent
    /// singularities.
    pub fn upper_right(&self) -> Result<UniPoly> {
        self.entries.e[0][1].as_poly()
    }

    pub fn upper_left(&self) -> Result<UniPoly> {
        self.entries.e[0][0].as_poly()
    }

    /// The free subleading parameter δ∞, read off the (2,1) entry.
    pub fn delta_inf(&self) -> Result<Rat> {
        let p = self.entries.e[1][0].as_poly()?;
        Ok(p.coeff(self.r_inf() - 3))
    }
}

/// Spectral side of a connection: the two eigenvalue expansions at the pole,
/// the irregular times they encode and the isospectral Hamiltonians.
#[derive(Clone, PartialEq, Debug)]
pub struct SpectralData {
    pub r_inf: usize,
    pub y1: HalfSeries,
    pub y2: HalfSeries,
    pub birkhoff_times: Vec<Rat>,
    pub iso_hams: Vec<Rat>,
}

#[derive(Serialize)]
struct SpectralDataJson<'a> {
    r_inf: usize,
    times: &'a [Rat],
    iso_hams: &'a [Rat],
}

impl SpectralData {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpectralDataJson {
            r_inf: self.r_inf,
            times: &self.birkhoff_times,
            iso_hams: &self.iso_hams,
        })
        .expect("serializable")
    }
}

/// Check every normalization invariant; report the first violation.
pub fn validate_normalization(conn: &TwistedConnection) -> Result<()> {
    let r = conn.r_inf();
    let t = &conn.times;
    let fail = |place: &str, detail: String| {
        Err(Error::Normalization {
            place: place.into(),
            detail,
        })
    };
    let mut polys = [[UniPoly::zero(), UniPoly::zero()], [UniPoly::zero(), UniPoly::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            match conn.entries.e[i][j].as_poly() {
                Ok(p) => polys[i][j] = p,
                Err(_) => {
                    return fail(
                        &format!("entry ({},{})", i + 1, j + 1),
                        "has finite poles".into(),
                    )
                }
            }
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            if let Some(d) = polys[i][j].degree() {
                if d > r - 2 {
                    return fail(
                        &format!("entry ({},{})", i + 1, j + 1),
                        format!("degree {d} exceeds {}", r - 2),
                    );
                }
            }
        }
    }
    let ur = &polys[0][1];
    if ur.degree() != Some(r - 3) || !ur.is_monic() {
        return fail(
            "entry (1,2)",
            format!("not monic of degree {}: {ur}", r - 3),
        );
    }
    // leading block, coefficient of λ^{r∞−2}
    let half = Rat::new(-1, 2);
    let lead_diag = &half * t.t(2 * r - 2);
    let lead_sub = {
        let s = t.t(2 * r - 3);
        &(s * s) * &Rat::new(1, 4)
    };
    let checks_lead = [
        (0usize, 0usize, lead_diag.clone()),
        (0, 1, Rat::zero()),
        (1, 0, lead_sub),
        (1, 1, lead_diag),
    ];
    for (i, j, want) in checks_lead {
        let got = polys[i][j].coeff(r - 2);
        if got != want {
            return fail(
                &format!("block {} entry ({},{})", r - 1, i + 1, j + 1),
                format!("expected {want}, found {got}"),
            );
        }
    }
    // subleading block, coefficient of λ^{r∞−3}; the (2,1) entry is free (δ∞)
    let sub_diag = &half * t.t(2 * r - 4);
    let checks_sub = [
        (0usize, 0usize, sub_diag.clone()),
        (0, 1, Rat::one()),
        (1, 1, sub_diag),
    ];
    for (i, j, want) in checks_sub {
        let got = polys[i][j].coeff(r - 3);
        if got != want {
            return fail(
                &format!("block {} entry ({},{})", r - 2, i + 1, j + 1),
                format!("expected {want}, found {got}"),
            );
        }
    }
    Ok(())
}

/// Trace and determinant of the connection as polynomials in λ.
pub fn spectral_curve(conn: &TwistedConnection) -> Result<(UniPoly, UniPoly)> {
    let tr = conn.entries.trace().as_poly().map_err(|_| {
        Error::NonPolynomialDet("trace has finite poles".into())
    })?;
    let det = conn.entries.det().as_poly()?;
    Ok((tr, det))
}

/// Eigenvalue expansions of the connection at the pole, to the requested
/// doubled truncation order. The first branch is pinned to the sheet whose
/// λ^((2r∞−3)/2 − 1) coefficient is −½t∞,2r∞−3.
pub fn eigenvalue_series(
    conn: &TwistedConnection,
    order2: i64,
) -> Result<(HalfSeries, HalfSeries)> {
    let (tr, det) = spectral_curve(conn)?;
    eigenvalues_from_curve(&tr, &det, &conn.times, order2)
}

pub fn eigenvalues_from_curve(
    tr: &UniPoly,
    det: &UniPoly,
    times: &IrregularTimes,
    order2: i64,
) -> Result<(HalfSeries, HalfSeries)> {
    let r = times.r_inf();
    // y = tr/2 ± √(tr²/4 − det); the discriminant's leading coefficient is
    // ¼t∞,2r∞−3², a rational square whenever the times are rational
    let quarter = Rat::new(1, 4);
    let disc = &(tr * tr).scale(&quarter) - det;
    let root = HalfSeries::from_poly(&disc).sqrt(order2)?;
    let half_tr = HalfSeries::from_poly(&tr.scale(&Rat::new(1, 2))).truncate(order2);
    let pin_exp = 2 * (r as i64) - 5; // doubled exponent of λ^((2r∞−3)/2 − 1)
    let target = &Rat::new(-1, 2) * times.t(2 * r - 3);
    let lead = root.coeff(pin_exp)?;
    let signed_root = if lead == target {
        root
    } else if -&lead == target {
        root.neg()
    } else {
        return Err(Error::Normalization {
            place: "eigenvalue sheet".into(),
            detail: format!(
                "discriminant root coefficient {lead} matches neither ±{target}"
            ),
        });
    };
    let y1 = half_tr.add(&signed_root);
    let y2 = half_tr.sub(&signed_root);
    Ok((y1, y2))
}

/// Irregular times read from the first eigenvalue branch: t∞,k is −2 times
/// the λ^(k/2−1) coefficient of y₁, equivalently the residue at infinity of
/// λ^(−k/2)·y₁·dλ on the double cover.
pub fn extract_birkhoff_times(y1: &HalfSeries, r_inf: usize) -> Result<Vec<Rat>> {
    (1..=2 * r_inf - 2)
        .map(|k| Ok(&Rat::from_int(-2) * &y1.coeff(k as i64 - 2)?))
        .collect()
}

/// Isospectral Hamiltonians: I∞,k is 1/k times the λ^(−k/2−1) coefficient
/// of y₁.
pub fn extract_isospectral_hams(y1: &HalfSeries, r_inf: usize) -> Result<Vec<Rat>> {
    (1..=2 * r_inf - 2)
        .map(|k| Ok(&y1.coeff(-(k as i64) - 2)? / &Rat::from_int(k as i64)))
        .collect()
}

/// Default doubled truncation order deep enough for every extraction:
/// past the displayed O(λ^(−r∞−2)) error term.
pub fn default_order2(r_inf: usize) -> i64 {
    -2 * (r_inf as i64 + 2)
}

/// Full spectral side of a connection.
pub fn spectral_data(conn: &TwistedConnection) -> Result<SpectralData> {
    let r = conn.r_inf();
    let (y1, y2) = eigenvalue_series(conn, default_order2(r))?;
    let birkhoff_times = extract_birkhoff_times(&y1, r)?;
    let iso_hams = extract_isospectral_hams(&y1, r)?;
    Ok(SpectralData {
        r_inf: r,
        y1,
        y2,
        birkhoff_times,
        iso_hams,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn times_constructor_checks() {
        assert!(IrregularTimes::new(4, vec![rat(1); 5], Rat::one()).is_err());
        let mut t = vec![rat(0); 6];
        t[4] = rat(0); // t₅ = 0 → degenerate
        assert!(IrregularTimes::new(4, t, Rat::one()).is_err());
        let times = IrregularTimes::canonical(4, &[rat(3)], Rat::one()).unwrap();
        assert_eq!(*times.t(5), rat(2));
        assert_eq!(*times.t(1), rat(6));
        assert!(times.is_canonical_slice());
        assert_eq!(times.tau(), vec![rat(3)]);
    }

    #[test]
    fn spectral_curve_flat_painleve_point() {
        // r∞=4, q=0, p=0, τ₁=0: tr = 0 and det = −λ³ (H∞,0 = 0)
        let chart = crate::oper::Chart::qp(vec![rat(0)], vec![rat(0)]).unwrap();
        let times = IrregularTimes::canonical(4, &[rat(0)], Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let (tr, det) = spectral_curve(&conn).unwrap();
        assert!(tr.is_zero());
        assert_eq!(det, UniPoly::monomial(rat(-1), 3));
    }

    #[test]
    fn det_leading_coefficient_reduced() {
        // traceless case: deg det = 2r∞−5 with leading −¼t∞,2r∞−3²
        let chart = crate::oper::Chart::qp(vec![rat(1), rat(2)], vec![rat(3), rat(-1)]).unwrap();
        let times = IrregularTimes::canonical(5, &[rat(2), rat(-3)], Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let (tr, det) = spectral_curve(&conn).unwrap();
        assert!(tr.is_zero());
        assert_eq!(det.degree(), Some(2 * 5 - 5));
        assert_eq!(det.leading(), rat(-1)); // −¼·2²
    }

    #[test]
    fn eigenvalues_satisfy_vieta() {
        let chart = crate::oper::Chart::qp(vec![rat(1)], vec![rat(2)]).unwrap();
        // a non-reduced time vector exercises the tr/2 ± √disc path
        let t: Vec<Rat> = vec![rat(1), rat(-2), rat(0), rat(3), rat(2), Rat::new(1, 2)];
        let times = IrregularTimes::new(4, t, Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let order = default_order2(4);
        let (y1, y2) = eigenvalue_series(&conn, order).unwrap();
        let (tr, det) = spectral_curve(&conn).unwrap();
        let sum = y1.add(&y2);
        let prod = y1.mul(&y2);
        assert!(sum.agrees_with(&HalfSeries::from_poly(&tr)));
        assert!(prod.agrees_with(&HalfSeries::from_poly(&det)));
    }

    #[test]
    fn eigenvalue_sheet_pinned_by_leading_time() {
        // canonical r∞=4 (t₅ = 2): y₁ starts at −λ^(3/2)
        let chart = crate::oper::Chart::qp(vec![rat(1)], vec![rat(2)]).unwrap();
        let times = IrregularTimes::canonical(4, &[rat(3)], Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let (y1, y2) = eigenvalue_series(&conn, default_order2(4)).unwrap();
        assert_eq!(y1.coeff(3).unwrap(), rat(-1));
        assert!(y1.add(&y2).is_zero_to_order()); // traceless: y₂ = −y₁
    }

    #[test]
    fn birkhoff_extraction_round_trip_fixed() {
        // general rational times, r∞ = 4: extraction inverts the build
        let chart = crate::oper::Chart::qp(vec![Rat::new(1, 2)], vec![rat(-2)]).unwrap();
        let t: Vec<Rat> = vec![
            rat(3),
            Rat::new(-1, 2),
            rat(1),
            rat(4),
            Rat::new(2, 3),
            rat(-1),
        ];
        let times = IrregularTimes::new(4, t.clone(), Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let data = spectral_data(&conn).unwrap();
        assert_eq!(data.birkhoff_times, t);
    }

    #[test]
    fn extraction_matches_residue_route() {
        // t∞,k also equals the residue at infinity of λ^(−k/2)·y₁·dλ
        let chart = crate::oper::Chart::qp(vec![rat(1)], vec![rat(2)]).unwrap();
        let times = IrregularTimes::canonical(4, &[rat(3)], Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let data = spectral_data(&conn).unwrap();
        for k in 1..=6usize {
            let shifted = HalfSeries::monomial(Rat::one(), -(k as i64)).mul(&data.y1);
            assert_eq!(
                shifted.residue_at_infinity().unwrap(),
                data.birkhoff_times[k - 1],
                "time index {k}"
            );
        }
        assert_eq!(data.birkhoff_times[4], rat(2)); // t∞,2r∞−3 = 2 on the slice
    }

    #[test]
    fn reduced_input_kills_even_extractions() {
        let chart = crate::oper::Chart::qp(vec![rat(2), rat(-1)], vec![rat(1), rat(5)]).unwrap();
        let times = IrregularTimes::canonical(5, &[Rat::new(1, 3), rat(2)], Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let data = spectral_data(&conn).unwrap();
        for k in (2..=8).step_by(2) {
            assert!(data.birkhoff_times[k - 1].is_zero(), "even time {k}");
            assert!(data.iso_hams[k - 1].is_zero(), "even Hamiltonian {k}");
        }
    }

    #[test]
    fn iso_ham_read_off() {
        // a single term 3·λ^(−3/2−1) in y₁ gives I∞,3 = 1
        let y1 = HalfSeries::monomial(rat(3), -5);
        let hams = extract_isospectral_hams(&y1, 4).unwrap();
        assert_eq!(hams[2], rat(1));
        assert!(hams[0].is_zero());
    }

    #[test]
    fn validate_rejects_perturbed_leading_block() {
        let chart = crate::oper::Chart::qp(vec![rat(1)], vec![rat(2)]).unwrap();
        let times = IrregularTimes::canonical(4, &[rat(3)], Rat::one()).unwrap();
        let mut conn = crate::oper::build_connection(&chart, &times).unwrap();
        validate_normalization(&conn).unwrap();
        // set the (1,2) leading coefficient λ^{r∞−2} to 1
        let bump = RatFunc::from_poly(UniPoly::monomial(rat(1), 4 - 2));
        conn.entries.e[0][1] = &conn.entries.e[0][1] + &bump;
        let err = validate_normalization(&conn).unwrap_err();
        match err {
            Error::Normalization { place, .. } => {
                assert!(place.contains("(1,2)"), "reported place: {place}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn spectral_data_json_shape() {
        let chart = crate::oper::Chart::qp(vec![], vec![]).unwrap();
        let times = IrregularTimes::canonical(3, &[], Rat::one()).unwrap();
        let conn = crate::oper::build_connection(&chart, &times).unwrap();
        let json = spectral_data(&conn).unwrap().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["r_inf"], 3);
        assert_eq!(v["times"][2], "2");
        assert!(v["iso_hams"].is_array());
    }

    #[test]
    fn canonical_slice_higher_order() {
        let times =
            IrregularTimes::canonical(6, &[rat(1), rat(2), rat(3)], Rat::one()).unwrap();
        // τ_k = ½ t_{2r∞−2k−5}
        assert_eq!(*times.t(5), rat(2)); // 2τ₁
        assert_eq!(*times.t(3), rat(4)); // 2τ₂
        assert_eq!(*times.t(1), rat(6)); // 2τ₃
        assert_eq!(*times.t(9), rat(2)); // leading odd time
        assert!(times.t(7).is_zero());
        assert!(times.is_canonical_slice());
        assert_eq!(times.tau(), vec![rat(1), rat(2), rat(3)]);
    }
}
