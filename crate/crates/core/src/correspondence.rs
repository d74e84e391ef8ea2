//! The isomonodromic↔isospectral bridge: geometric and Lax coordinate
//! charts with their matrix realizations, the determinant identity relating
//! oper coefficients to isospectral Hamiltonians, the recursive solver for
//! the isospectral coordinates (u, v), and compatibility verification of the
//! underlying flow system.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{
    dense_solve, toeplitz_lower_solve, varset, MultiPoly, Rat, UniPoly, VarSet,
};
use crate::connection::IrregularTimes;
use crate::deformation::{nu_at, nu_coefficients, DeformationVector};
use crate::error::{Error, Result};
use crate::oper::{g0, lagrange_interpolant, oper_coeffs, Chart, ChartKind};

/// ∂Q_k/∂q_i in closed form: ∂Q_{r∞−4}/∂q_i = −1 and, for lower k,
/// ∂Q_k/∂q_i = −q_i^{r∞−4−k} − Σ_{j=k+1}^{r∞−4} Q_j·q_i^{j−1−k}; these are
/// the coefficients of −Π_{l≠i}(λ−q_l).
fn symmetric_partials(q: &[Rat]) -> Vec<Vec<Rat>> {
    let g = q.len();
    let prod = UniPoly::from_roots(q);
    let big_q: Vec<Rat> = (0..g).map(|k| prod.coeff(k)).collect();
    let mut rows = vec![vec![Rat::zero(); g]; g];
    for (i, qi) in q.iter().enumerate() {
        for k in 0..g {
            let mut v = if k == g - 1 {
                Rat::from_int(-1)
            } else {
                -&qi.pow((g - 1 - k) as i64)
            };
            if k + 1 < g {
                for j in (k + 1)..g {
                    v -= &(&big_q[j] * &qi.pow((j - 1 - k) as i64));
                }
            }
            rows[i][k] = v;
        }
    }
    rows
}

/// Forward change (q, p) → (Q, P): Q are the non-leading coefficients of
/// Π(λ−qⱼ) and P solves pⱼ = Σ P_k ∂Q_k/∂qⱼ.
pub fn geometric_forward(chart: &Chart) -> Result<Chart> {
    let q = chart.q();
    let p = chart.p();
    let g = q.len();
    if g == 0 {
        return Chart::geometric(vec![], vec![]);
    }
    let prod = UniPoly::from_roots(q);
    let big_q: Vec<Rat> = (0..g).map(|k| prod.coeff(k)).collect();
    let partials = symmetric_partials(q);
    let big_p = dense_solve(&partials, p).ok_or_else(|| Error::Dimension(
        "coordinate system degenerate: ∂Q/∂q singular".into(),
    ))?;
    Chart::geometric(big_q, big_p)
}

/// Inverse change (Q, P) → (q, p); the symmetric polynomial must split over
/// the rationals with simple roots.
pub fn geometric_backward(chart: &Chart) -> Result<Chart> {
    assert_eq!(chart.kind(), ChartKind::Geometric);
    let g = chart.g();
    if g == 0 {
        return Chart::qp(vec![], vec![]);
    }
    let mut coeffs = chart.first().to_vec();
    coeffs.push(Rat::one());
    let prod = UniPoly::from_coeffs(coeffs);
    let q = prod.rational_roots()?;
    for i in 0..q.len() {
        for j in (i + 1)..q.len() {
            if q[i] == q[j] {
                return Err(Error::CoincidentNodes { i, j });
            }
        }
    }
    let partials = symmetric_partials(&q);
    let p: Vec<Rat> = (0..g)
        .map(|i| {
            let mut acc = Rat::zero();
            for k in 0..g {
                acc += &(&chart.second()[k] * &partials[i][k]);
            }
            acc
        })
        .collect();
    Chart::qp(q, p)
}

/// Lax coordinates from geometric ones:
/// R_k = −P_{r∞−4−k} − Σ_{m=0}^{r∞−5−k} P_m Q_{k+1+m}
///       − [k>0]·½t∞,2r∞−2·Q_{k−1} − g₀·Q_k.
/// These are precisely the coefficients of [L̃]₁,₁ below λ^{r∞−3}. With the
/// canonical-lift convention pⱼ = Σ P_k ∂Q_k/∂qⱼ (the one that makes
/// (q,p) → (Q,P) symplectic) the P-sums enter with a minus sign.
pub fn lax_forward(chart: &Chart, times: &IrregularTimes) -> Result<Chart> {
    assert_eq!(chart.kind(), ChartKind::Geometric);
    let r = times.r_inf();
    let g = chart.g();
    let big_q = chart.first();
    let big_p = chart.second();
    let g0v = g0_from_symmetric(times, big_q);
    let half_lead = &Rat::new(1, 2) * times.t(2 * r - 2);
    let mut big_r = Vec::with_capacity(g);
    for k in 0..g {
        let mut v = -&big_p[g - 1 - k];
        for m in 0..g.saturating_sub(k + 1) {
            v -= &(&big_p[m] * &big_q[k + 1 + m]);
        }
        if k > 0 {
            v -= &(&half_lead * &big_q[k - 1]);
        }
        v -= &(&g0v * &big_q[k]);
        big_r.push(v);
    }
    Chart::lax(big_q.to_vec(), big_r)
}

/// g₀ expressed through the symmetric coordinates: Σqⱼ = −Q_{r∞−4}.
fn g0_from_symmetric(times: &IrregularTimes, big_q: &[Rat]) -> Rat {
    let r = times.r_inf();
    let half = Rat::new(1, 2);
    let sum_q = if big_q.is_empty() {
        Rat::zero()
    } else {
        -&big_q[big_q.len() - 1]
    };
    &(&half * times.t(2 * r - 4)) + &(&(&half * times.t(2 * r - 2)) * &sum_q)
}

/// Inverse of `lax_forward`: the system is unit-triangular in P.
pub fn lax_backward(chart: &Chart, times: &IrregularTimes) -> Result<Chart> {
    assert_eq!(chart.kind(), ChartKind::Lax);
    let r = times.r_inf();
    let g = chart.g();
    let big_q = chart.first();
    let big_r = chart.second();
    let g0v = g0_from_symmetric(times, big_q);
    let half_lead = &Rat::new(1, 2) * times.t(2 * r - 2);
    let mut big_p = vec![Rat::zero(); g];
    for k in (0..g).rev() {
        // solve for P_{g−1−k}: all P_m with m ≤ g−2−k are already known
        let mut v = -&big_r[k];
        for m in 0..g.saturating_sub(k + 1) {
            v -= &(&big_p[m] * &big_q[k + 1 + m]);
        }
        if k > 0 {
            v -= &(&half_lead * &big_q[k - 1]);
        }
        v -= &(&g0v * &big_q[k]);
        big_p[g - 1 - k] = v;
    }
    Chart::geometric(big_q.to_vec(), big_p)
}

/// First rows of the connection and auxiliary matrices assembled from a
/// chart's own coordinates: (L̃₁,₁, L̃₁,₂, Ã₁,₁, Ã₁,₂). The connection
/// entries are valid at any times; the auxiliary entries use the reduced
/// (traceless) display and require reduced times.
pub struct ChartMatrices {
    pub l11: UniPoly,
    pub l12: UniPoly,
    pub a11: UniPoly,
    pub a12: UniPoly,
}

fn nu_window(alpha: &DeformationVector, times: &IrregularTimes) -> Result<Vec<Rat>> {
    if !times.is_reduced() {
        return Err(Error::InvalidTimes(
            "auxiliary-matrix chart displays require reduced times".into(),
        ));
    }
    nu_coefficients(alpha, times)
}

fn aux_rows_from_sk(sk: &[Rat], big_q: &[Rat], nu: &[Rat], g: usize) -> (UniPoly, UniPoly) {
    // Ã₁,₂ coefficient at λ^j: Σ_{k=j+1}^{r∞−3} Q_k ν_{k−j} (monic Q_{r∞−3} = 1)
    let mut a12 = vec![Rat::zero(); g.max(1)];
    for j in 0..g {
        let mut acc = Rat::zero();
        for k in (j + 1)..=g {
            let qk = if k == g { Rat::one() } else { big_q[k].clone() };
            acc += &(&qk * nu_at(nu, (k - j) as i64));
        }
        a12[j] = acc;
    }
    // Ã₁,₁ coefficient at λ^j: Σ_{i=1}^{r∞−4−j} s_{i+j} ν_i
    let mut a11 = vec![Rat::zero(); g.max(1)];
    for j in 0..g.saturating_sub(1) {
        let mut acc = Rat::zero();
        for i in 1..=(g - 1 - j) {
            acc += &(&sk[i + j] * nu_at(nu, i as i64));
        }
        a11[j] = acc;
    }
    (UniPoly::from_coeffs(a11), UniPoly::from_coeffs(a12))
}

/// Matrix rows in the geometric chart (Q, P).
pub fn matrices_in_geometric(
    chart: &Chart,
    times: &IrregularTimes,
    alpha: &DeformationVector,
) -> Result<ChartMatrices> {
    assert_eq!(chart.kind(), ChartKind::Geometric);
    let r = times.r_inf();
    let g = chart.g();
    let big_q = chart.first();
    let big_p = chart.second();
    let mut l12_coeffs = big_q.to_vec();
    l12_coeffs.push(Rat::one());
    let l12 = UniPoly::from_coeffs(l12_coeffs);
    // L̃₁,₁ = −Σ_k P_{r∞−4−k}λ^k − Σ_k Σ_m P_m Q_{k+1+m} λ^k − (½t∞,2r∞−2λ + g₀)·L̃₁,₂
    // (this is −Q_lagrange − (½t·λ + g₀)·Π expanded through the chart)
    let mut poly = vec![Rat::zero(); g.max(1)];
    for k in 0..g {
        let mut v = -&big_p[g - 1 - k];
        for m in 0..g.saturating_sub(k + 1) {
            v -= &(&big_p[m] * &big_q[k + 1 + m]);
        }
        poly[k] = v;
    }
    let line = UniPoly::from_coeffs(vec![
        g0_from_symmetric(times, big_q),
        &Rat::new(1, 2) * times.t(2 * r - 2),
    ]);
    let l11 = &UniPoly::from_coeffs(poly) - &(&line * &l12);
    // auxiliary rows through the Lax coefficients s_k = R_k
    let nu = nu_window(alpha, times)?;
    let lax = lax_forward(chart, times)?;
    let (a11, a12) = aux_rows_from_sk(lax.second(), big_q, &nu, g);
    Ok(ChartMatrices { l11, l12, a11, a12 })
}

/// Matrix rows in the Lax chart (Q, R): here the connection entry (1,1) is
/// Σ R_k λ^k − ½t∞,2r∞−4·λ^{r∞−3} − ½t∞,2r∞−2·λ^{r∞−2}.
pub fn matrices_in_lax(
    chart: &Chart,
    times: &IrregularTimes,
    alpha: &DeformationVector,
) -> Result<ChartMatrices> {
    assert_eq!(chart.kind(), ChartKind::Lax);
    let r = times.r_inf();
    let g = chart.g();
    let big_q = chart.first();
    let big_r = chart.second();
    let mut l12_coeffs = big_q.to_vec();
    l12_coeffs.push(Rat::one());
    let l12 = UniPoly::from_coeffs(l12_coeffs);
    let half = Rat::new(-1, 2);
    let mut l11 = UniPoly::from_coeffs(big_r.to_vec());
    l11 = &l11 + &UniPoly::monomial(&half * times.t(2 * r - 4), r - 3);
    l11 = &l11 + &UniPoly::monomial(&half * times.t(2 * r - 2), r - 2);
    let nu = nu_window(alpha, times)?;
    let (a11, a12) = aux_rows_from_sk(big_r, big_q, &nu, g);
    Ok(ChartMatrices { l11, l12, a11, a12 })
}

/// Polynomial part of L̃₁,₂·∂λ(L̃₁,₁/L̃₁,₂) = L̃₁,₁′ − Σⱼ (L̃₁,₁(λ)−L̃₁,₁(qⱼ))/(λ−qⱼ),
/// whose coefficients are the residue data of the determinant identity.
pub fn residue_terms(chart: &Chart, times: &IrregularTimes) -> Result<Vec<Rat>> {
    let r = times.r_inf();
    let q = chart.q();
    let lag = lagrange_interpolant(q, chart.p())?;
    let prod = UniPoly::from_roots(q);
    let line = UniPoly::from_coeffs(vec![
        g0(times, q),
        &Rat::new(1, 2) * times.t(2 * r - 2),
    ]);
    let gamma = &(-&lag) - &(&line * &prod);
    let mut f = gamma.derivative();
    for qj in q {
        let lin = UniPoly::from_coeffs(vec![-qj, Rat::one()]);
        let shifted = &gamma - &UniPoly::constant(gamma.eval(qj));
        f = &f - &shifted.exact_div(&lin).expect("difference quotient divides");
    }
    Ok((0..=r.saturating_sub(4)).map(|m| f.coeff(m)).collect())
}

/// Quadratic time sum entering the determinant identity at λ^m:
/// ¼ Σ t∞,k t∞,k′ over odd pairs k + k′ = 2m + 4.
fn quadratic_time_sum(times: &IrregularTimes, m: usize) -> Rat {
    let n = 2 * times.r_inf() - 2;
    let mut acc = Rat::zero();
    let total = 2 * m + 4;
    let mut k = 1;
    while k < total && k <= n {
        let other = total - k;
        if k % 2 == 1 && other >= 1 && other <= n {
            acc += &(times.t(k) * times.t(other));
        }
        k += 2;
    }
    &acc * &Rat::new(1, 4)
}

/// Output of the determinant identity between oper coefficients and
/// isospectral Hamiltonians at the canonical slice.
#[derive(Clone, Debug, Serialize)]
pub struct HiMap {
    /// H∞,0 … H∞,r∞−4 (input side)
    pub oper_coeffs: Vec<Rat>,
    /// I∞,1, I∞,3, …, I∞,2r∞−7 solved from the triangular system
    pub iso_odd: Vec<Rat>,
    /// oper coefficients recomputed from the isospectral side (round trip)
    pub oper_from_iso: Vec<Rat>,
    /// residue/quadratic-sum vector, one entry per system row
    pub n_vector: Vec<Rat>,
}

/// Both directions of the determinant identity: the truncated Toeplitz
/// system M̂∞·(I∞,1, 3I∞,3, …) = ([f]_m + ¼Σtt − H_m)_m with rows ordered
/// m = r∞−4 … 0, and its inverse H_m = [f]_m + ¼Σtt − Σ(2j−1)t∞,2m+3+2j·I∞,2j−1.
pub fn h_i_map(chart: &Chart, times: &IrregularTimes) -> Result<HiMap> {
    if !times.is_canonical_slice() {
        return Err(Error::InvalidTimes(
            "determinant identity requires the canonical slice".into(),
        ));
    }
    let r = times.r_inf();
    let g = r - 3;
    let h = oper_coeffs(chart, times)?;
    let f = residue_terms(chart, times)?;
    let column: Vec<Rat> = (0..g).map(|i| times.t(2 * r - 3 - 2 * i).clone()).collect();
    let mut rhs = Vec::with_capacity(g);
    let mut n_vector = Vec::with_capacity(g);
    for row in 0..g {
        let m = r - 4 - row;
        let nval = &f[m] + &quadratic_time_sum(times, m);
        n_vector.push(nval.clone());
        rhs.push(&nval - &h[m]);
    }
    let x = toeplitz_lower_solve(&column, &rhs)?;
    let iso_odd: Vec<Rat> = x
        .iter()
        .enumerate()
        .map(|(j, v)| v / &Rat::from_int(2 * j as i64 + 1))
        .collect();
    // inverse direction
    let mut oper_from_iso = vec![Rat::zero(); g];
    for m in 0..g {
        let mut v = &f[m] + &quadratic_time_sum(times, m);
        for j in 1..=(r - 3 - m) {
            let idx = 2 * j + 2 * m + 3;
            v -= &(&(&Rat::from_int(2 * j as i64 - 1) * times.t(idx)) * &iso_odd[j - 1]);
        }
        oper_from_iso[m] = v;
    }
    Ok(HiMap {
        oper_coeffs: h,
        iso_odd,
        oper_from_iso,
        n_vector,
    })
}

/// The reduced Hamiltonian written through the isospectral Hamiltonians:
/// Σ_k ν∞,k+1·([f]_k + ¼Σtt − Σ_j (2j−1)·t∞,2k+3+2j·I∞,2j−1). Equals the
/// reduced Hamiltonian exactly; the isospectral values come from the
/// eigenvalue expansion, making the two sides genuinely independent routes.
pub fn hamiltonian_in_iso(
    tau: &[Rat],
    chart: &Chart,
    j: usize,
    times: &IrregularTimes,
) -> Result<Rat> {
    if !times.is_canonical_slice() {
        return Err(Error::InvalidTimes(
            "isospectral Hamiltonian form requires the canonical slice".into(),
        ));
    }
    let r = times.r_inf();
    let conn = crate::oper::build_connection(chart, times)?;
    let data = crate::connection::spectral_data(&conn)?;
    let f = residue_terms(chart, times)?;
    let nu = crate::reduction::reduced_nu(tau, j, r);
    let mut ham = Rat::zero();
    for k in 0..=(r - 4) {
        let mut hk = &f[k] + &quadratic_time_sum(times, k);
        for jj in 1..=(r - 3 - k) {
            let idx = 2 * jj + 2 * k + 3;
            hk -= &(&(&Rat::from_int(2 * jj as i64 - 1) * times.t(idx))
                * &data.iso_hams[2 * jj - 2]);
        }
        ham += &(&nu[k] * &hk);
    }
    Ok(ham)
}

/// Which family of isospectral coordinates a shift solution describes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftKind {
    /// coefficients of [L̃]₁,₂ with constants u
    U,
    /// coefficients of [L̃]₁,₁ with constants v
    V,
}

/// Triangular time-polynomial expressions for the chart coefficients whose
/// integration constants are the isospectral coordinates: coords[k] is
/// Q∞,k(t; u) (kind U) or R∞,k(t; v) (kind V).
#[derive(Clone, Debug)]
pub struct ShiftSolution {
    pub r_inf: usize,
    pub kind: ShiftKind,
    pub vars: VarSet,
    pub coords: Vec<MultiPoly>,
}

impl ShiftSolution {
    fn const_name(kind: ShiftKind, m: usize) -> String {
        match kind {
            ShiftKind::U => format!("u{m}"),
            ShiftKind::V => format!("v{m}"),
        }
    }

    /// Odd times driving the system, highest first: t∞,2r∞−7, …, t∞,3.
    pub fn time_indices(r_inf: usize) -> Vec<usize> {
        if r_inf < 5 {
            return vec![];
        }
        (0..r_inf - 4).map(|b| 2 * r_inf - 7 - 2 * b).collect()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Record {
            coordinate: String,
            polynomial: String,
        }
        let prefix = match self.kind {
            ShiftKind::U => "Q",
            ShiftKind::V => "R",
        };
        let records: Vec<Record> = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, p)| Record {
                coordinate: format!("{prefix}{k}"),
                polynomial: p.to_string(),
            })
            .collect();
        serde_json::to_string(&records).expect("serializable")
    }
}

struct ShiftSystem {
    r_inf: usize,
    kind: ShiftKind,
    vars: VarSet,
    times: Vec<usize>,
    /// symbolic expansion coefficients ν∞,1 … ν∞,r∞−4 per time direction:
    /// nu[b][i−1] is ν∞,i for the direction e_{t∞,times[b]}
    nu: Vec<Vec<MultiPoly>>,
}

impl ShiftSystem {
    fn new(r_inf: usize, kind: ShiftKind) -> Self {
        let times = ShiftSolution::time_indices(r_inf);
        let mut names: Vec<String> = times.iter().map(|k| format!("t{k}")).collect();
        for m in 0..=r_inf - 4 {
            names.push(ShiftSolution::const_name(kind, m));
        }
        let vars = varset(&names.iter().map(String::as_str).collect::<Vec<_>>());
        let nu = times
            .iter()
            .map(|&j| Self::symbolic_nu(r_inf, &vars, &times, j))
            .collect();
        ShiftSystem {
            r_inf,
            kind,
            vars,
            times,
            nu,
        }
    }

    /// Forward substitution of the lower-triangular Toeplitz system for
    /// (ν∞,1, …, ν∞,r∞−4) with symbolic canonical-slice times (diagonal
    /// t∞,2r∞−3 = 2, first subdiagonal t∞,2r∞−5 = 0, deeper subdiagonals the
    /// odd time variables) and right-hand side 2/j at the row of t∞,j.
    fn symbolic_nu(
        r_inf: usize,
        vars: &VarSet,
        times: &[usize],
        j: usize,
    ) -> Vec<MultiPoly> {
        let n = r_inf - 4;
        let pivot_row = (2 * r_inf - 5 - j) / 2; // 1-based block row carrying the rhs
        let half = Rat::new(1, 2);
        let mut nu: Vec<MultiPoly> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut acc = if k == pivot_row {
                MultiPoly::constant(vars, Rat::new(2, j as i64))
            } else {
                MultiPoly::zero(vars)
            };
            for d in 2..k {
                // subdiagonal entry t∞,2r∞−3−2d
                let idx = 2 * r_inf - 3 - 2 * d;
                if times.contains(&idx) {
                    let t = MultiPoly::var(vars, &format!("t{idx}"));
                    acc = acc.sub(&t.mul(&nu[k - d - 1]));
                }
            }
            nu.push(acc.scale(&half));
        }
        nu
    }

    /// The prescribed partial ∂coords[m]/∂t for the time direction b: both
    /// systems read the λ-derivative of the corresponding auxiliary-matrix
    /// entry. The (1,2) entry is monic, so its flow carries a standalone
    /// ν term: δ[Q_m] = (m+1)·(ν∞,r∞−4−m + Σ_{k=m+2}^{r∞−4} ν∞,k−m−1·Q_k);
    /// the (1,1) entry has no top coefficient at the canonical slice, so
    /// only the strictly triangular sum survives:
    /// δ[R_m] = (m+1)·Σ_{k=m+2}^{r∞−4} ν∞,k−m−1·R_k.
    fn prescribed_partial(&self, coords: &[MultiPoly], m: usize, b: usize) -> MultiPoly {
        let nu = &self.nu[b];
        let top_weight = match self.kind {
            ShiftKind::U => Rat::one(),
            ShiftKind::V => Rat::zero(),
        };
        let mut acc = nu[self.r_inf - 4 - m - 1].scale(&top_weight);
        for k in (m + 2)..=(self.r_inf - 4) {
            acc = acc.add(&nu[k - m - 1 - 1].mul(&coords[k]));
        }
        acc.scale(&Rat::from_int(m as i64 + 1))
    }
}

/// Solve the triangular flow system for the shift polynomials: the top
/// coordinate is the bare constant, and each next coordinate integrates its
/// prescribed time-partials variable by variable, with full consistency
/// asserted after assembly.
fn solve_shift(r_inf: usize, kind: ShiftKind) -> Result<ShiftSolution> {
    assert!(r_inf >= 4, "shift solutions need r∞ ≥ 4");
    let sys = ShiftSystem::new(r_inf, kind);
    let g = r_inf - 3;
    let mut coords = vec![MultiPoly::zero(&sys.vars); g];
    coords[r_inf - 4] = MultiPoly::var(&sys.vars, &ShiftSolution::const_name(kind, r_inf - 4));
    for a in 0..r_inf.saturating_sub(4) {
        let m = r_inf - 5 - a;
        let mut acc = MultiPoly::zero(&sys.vars);
        for b in 0..sys.times.len() {
            let tname = format!("t{}", sys.times[b]);
            let want = sys.prescribed_partial(&coords, m, b);
            let defect = want.sub(&acc.partial(&tname));
            acc = acc.add(&defect.integrate(&tname));
        }
        // final consistency: the assembled polynomial satisfies every equation
        for b in 0..sys.times.len() {
            let tname = format!("t{}", sys.times[b]);
            if acc.partial(&tname) != sys.prescribed_partial(&coords, m, b) {
                return Err(Error::InconsistentIntegration {
                    var: tname,
                    coordinate: format!("index {m}"),
                });
            }
        }
        coords[m] = acc.add(&MultiPoly::var(
            &sys.vars,
            &ShiftSolution::const_name(kind, m),
        ));
    }
    Ok(ShiftSolution {
        r_inf,
        kind,
        vars: sys.vars,
        coords,
    })
}

/// Shift polynomials Q∞,k(t; u) for the (1,2)-entry coefficients.
pub fn solve_isospectral_u(r_inf: usize) -> Result<ShiftSolution> {
    solve_shift(r_inf, ShiftKind::U)
}

/// Shift polynomials R∞,k(t; v) for the (1,1)-entry coefficients.
pub fn solve_isospectral_v(r_inf: usize) -> Result<ShiftSolution> {
    solve_shift(r_inf, ShiftKind::V)
}

/// Mixed-partial compatibility [δ_{t_i}, δ_{t_j}]·coordinate = 0, checked
/// symbolically on the prescribed flow system evaluated at a shift solution.
/// Reports the first failing (i, j, coordinate) triple.
pub fn flow_compatibility_check(solution: &ShiftSolution) -> Result<()> {
    let sys = ShiftSystem::new(solution.r_inf, solution.kind);
    for a in 0..solution.r_inf.saturating_sub(4) {
        let m = solution.r_inf - 5 - a;
        // the solution must satisfy its own flow system …
        for b in 0..sys.times.len() {
            let tname = format!("t{}", sys.times[b]);
            if solution.coords[m].partial(&tname)
                != sys.prescribed_partial(&solution.coords, m, b)
            {
                return Err(Error::InconsistentIntegration {
                    var: tname,
                    coordinate: format!("index {m}"),
                });
            }
        }
        // … and the mixed partials of the prescription must commute
        for i in 0..sys.times.len() {
            for j in (i + 1)..sys.times.len() {
                let ti = format!("t{}", sys.times[i]);
                let tj = format!("t{}", sys.times[j]);
                let lhs = sys
                    .prescribed_partial(&solution.coords, m, i)
                    .partial(&tj);
                let rhs = sys
                    .prescribed_partial(&solution.coords, m, j)
                    .partial(&ti);
                if lhs != rhs {
                    return Err(Error::InconsistentIntegration {
                        var: format!("({ti}, {tj})"),
                        coordinate: format!("index {m}"),
                    });
                }
            }
        }
    }
    Ok(())
}

fn time_assignments(solution: &ShiftSolution, times: &IrregularTimes) -> BTreeMap<String, Rat> {
    let mut map = BTreeMap::new();
    for k in ShiftSolution::time_indices(solution.r_inf) {
        map.insert(format!("t{k}"), times.t(k).clone());
    }
    map
}

/// Invert a shift solution on concrete coefficient values: recover the
/// constants (u or v) top-down from the Q (or R) values at the given times.
pub fn constants_from_values(
    solution: &ShiftSolution,
    values: &[Rat],
    times: &IrregularTimes,
) -> Vec<Rat> {
    let g = solution.r_inf - 3;
    assert_eq!(values.len(), g);
    let mut assign = time_assignments(solution, times);
    for m in 0..g {
        assign.insert(ShiftSolution::const_name(solution.kind, m), Rat::zero());
    }
    let mut consts = vec![Rat::zero(); g];
    for m in (0..g).rev() {
        // the shift part of coords[m] uses only constants with index ≥ m+2,
        // already recovered; its own constant enters bare, so zeroing it
        // isolates the shift
        let shift = solution.coords[m].eval(&assign);
        let c = &values[m] - &shift;
        assign.insert(ShiftSolution::const_name(solution.kind, m), c.clone());
        consts[m] = c;
    }
    consts
}

/// Evaluate a shift solution at concrete times and constants.
pub fn values_from_constants(
    solution: &ShiftSolution,
    consts: &[Rat],
    times: &IrregularTimes,
) -> Vec<Rat> {
    let g = solution.r_inf - 3;
    assert_eq!(consts.len(), g);
    let mut assign = time_assignments(solution, times);
    for (m, c) in consts.iter().enumerate() {
        assign.insert(ShiftSolution::const_name(solution.kind, m), c.clone());
    }
    solution
        .coords
        .iter()
        .map(|p| p.eval(&assign))
        .collect()
}

/// Flow of (q, p) under the isospectral condition δ_t L̃ = ∂λÃ in a
/// deformation direction (the flow whose invariants the coordinates (u, v)
/// are): the coefficient rates read off the condition are
/// Q̇_m = (m+1)(ν∞,r∞−4−m + Σ_{k≥m+2} ν∞,k−m−1 Q_k) and
/// Ṙ_m = (m+1)·Σ_{k≥m+2} ν∞,k−m−1 R_k, with the top coefficients frozen;
/// they are pushed back through the chart Jacobians.
pub fn isospectral_flow_rates(
    alpha: &DeformationVector,
    chart: &Chart,
    times: &IrregularTimes,
) -> Result<(Vec<Rat>, Vec<Rat>)> {
    let r = times.r_inf();
    let g = chart.g();
    let geo = geometric_forward(chart)?;
    let lax = lax_forward(&geo, times)?;
    let nu = nu_coefficients(alpha, times)?;
    let rate = |vals: &[Rat], top_weight: &Rat| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); g];
        for m in 0..g.saturating_sub(1) {
            let mut acc = nu_at(&nu, (r - 4 - m) as i64) * top_weight;
            for k in (m + 2)..g {
                acc += &(nu_at(&nu, (k - m - 1) as i64) * &vals[k]);
            }
            out[m] = &acc * &Rat::from_int(m as i64 + 1);
        }
        out
    };
    let q_dot_sym = rate(geo.first(), &Rat::one());
    let r_dot = rate(lax.second(), &Rat::zero());
    // q̇ from Q̇ through ∂Q/∂q
    let partials = symmetric_partials(chart.q());
    let mut system = vec![vec![Rat::zero(); g]; g];
    for m in 0..g {
        for i in 0..g {
            system[m][i] = partials[i][m].clone();
        }
    }
    let q_dot = dense_solve(&system, &q_dot_sym)
        .ok_or_else(|| Error::Dimension("singular coordinate Jacobian".into()))?;
    // ṗ from pⱼ = [L̃₁,₁](qⱼ): the polynomial's variable coefficients are R
    let mut gamma_coeffs = lax.second().to_vec();
    gamma_coeffs.push(&Rat::new(-1, 2) * times.t(2 * r - 4));
    gamma_coeffs.push(&Rat::new(-1, 2) * times.t(2 * r - 2));
    let gamma = UniPoly::from_coeffs(gamma_coeffs);
    let gamma_prime = gamma.derivative();
    let p_dot: Vec<Rat> = (0..g)
        .map(|j| {
            let qj = &chart.q()[j];
            let mut v = &gamma_prime.eval(qj) * &q_dot[j];
            for (k, rk_dot) in r_dot.iter().enumerate() {
                v += &(rk_dot * &qj.pow(k as i64));
            }
            v
        })
        .collect();
    Ok((q_dot, p_dot))
}

/// The explicit map (q, p) → (u, v) at the canonical slice: compose the
/// geometric and Lax changes, then strip the time-shift polynomials.
pub fn map_qp_to_uv(chart: &Chart, times: &IrregularTimes) -> Result<Chart> {
    if !times.is_canonical_slice() {
        return Err(Error::InvalidTimes(
            "isospectral coordinates are defined at the canonical slice".into(),
        ));
    }
    let r = times.r_inf();
    let geo = geometric_forward(chart)?;
    let lax = lax_forward(&geo, times)?;
    let su = solve_isospectral_u(r)?;
    let sv = solve_isospectral_v(r)?;
    let u = constants_from_values(&su, geo.first(), times);
    let v = constants_from_values(&sv, lax.second(), times);
    Chart::isospectral(u, v)
}

/// Inverse of `map_qp_to_uv`; requires the symmetric polynomial rebuilt from
/// u to split over the rationals.
pub fn map_uv_to_qp(chart: &Chart, times: &IrregularTimes) -> Result<Chart> {
    assert_eq!(chart.kind(), ChartKind::Isospectral);
    let r = times.r_inf();
    let su = solve_isospectral_u(r)?;
    let sv = solve_isospectral_v(r)?;
    let big_q = values_from_constants(&su, chart.first(), times);
    let big_r = values_from_constants(&sv, chart.second(), times);
    let lax = Chart::lax(big_q, big_r)?;
    let geo = lax_backward(&lax, times)?;
    geometric_backward(&geo)
}
