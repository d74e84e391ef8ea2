//! Oper (companion) gauge: building the connection from Darboux coordinates,
//! the isomonodromic oper coefficients, the gauge matrix relating the two
//! forms, and recovery of apparent singularities from a connection.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{vandermonde_solve, Mat2, Rat, RatFunc, UniPoly};
use crate::connection::{IrregularTimes, TwistedConnection};
use crate::error::{Error, Result};

/// Which coordinate system a chart lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChartKind {
    /// apparent singularities and duals (q, p)
    Qp,
    /// symmetric-function coordinates (Q, P)
    Geometric,
    /// Lax coordinates (Q, R)
    Lax,
    /// isospectral coordinates (u, v)
    Isospectral,
}

impl ChartKind {
    fn keys(self) -> (&'static str, &'static str) {
        match self {
            ChartKind::Qp => ("q", "p"),
            ChartKind::Geometric => ("Q", "P"),
            ChartKind::Lax => ("Q", "R"),
            ChartKind::Isospectral => ("u", "v"),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ChartKind::Qp => "qp",
            ChartKind::Geometric => "geometric",
            ChartKind::Lax => "lax",
            ChartKind::Isospectral => "isospectral",
        }
    }
}

/// A Darboux chart: two coordinate vectors of equal length g = r∞ − 3.
/// For a qp chart the first coordinates must be pairwise distinct.
#[derive(Clone, PartialEq, Debug)]
pub struct Chart {
    kind: ChartKind,
    first: Vec<Rat>,
    second: Vec<Rat>,
}

impl Chart {
    pub fn new(kind: ChartKind, first: Vec<Rat>, second: Vec<Rat>) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::Dimension(format!(
                "{} vs {} coordinates",
                first.len(),
                second.len()
            )));
        }
        if kind == ChartKind::Qp {
            for i in 0..first.len() {
                for j in (i + 1)..first.len() {
                    if first[i] == first[j] {
                        return Err(Error::CoincidentNodes { i, j });
                    }
                }
            }
        }
        Ok(Chart {
            kind,
            first,
            second,
        })
    }

    pub fn qp(q: Vec<Rat>, p: Vec<Rat>) -> Result<Self> {
        Chart::new(ChartKind::Qp, q, p)
    }

    pub fn geometric(big_q: Vec<Rat>, big_p: Vec<Rat>) -> Result<Self> {
        Chart::new(ChartKind::Geometric, big_q, big_p)
    }

    pub fn lax(big_q: Vec<Rat>, big_r: Vec<Rat>) -> Result<Self> {
        Chart::new(ChartKind::Lax, big_q, big_r)
    }

    pub fn isospectral(u: Vec<Rat>, v: Vec<Rat>) -> Result<Self> {
        Chart::new(ChartKind::Isospectral, u, v)
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn g(&self) -> usize {
        self.first.len()
    }

    pub fn first(&self) -> &[Rat] {
        &self.first
    }

    pub fn second(&self) -> &[Rat] {
        &self.second
    }

    /// First coordinates of a qp chart.
    pub fn q(&self) -> &[Rat] {
        assert_eq!(self.kind, ChartKind::Qp, "not a qp chart");
        &self.first
    }

    /// Second coordinates of a qp chart.
    pub fn p(&self) -> &[Rat] {
        assert_eq!(self.kind, ChartKind::Qp, "not a qp chart");
        &self.second
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k1, k2) = self.kind.keys();
        let render = |v: &[Rat]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "{}: {k1}=[{}], {k2}=[{}]",
            self.kind.name(),
            render(&self.first),
            render(&self.second)
        )
    }
}

impl Serialize for Chart {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let (k1, k2) = self.kind.keys();
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("kind", self.kind.name())?;
        m.serialize_entry(k1, &self.first)?;
        m.serialize_entry(k2, &self.second)?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for Chart {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use std::collections::BTreeMap;
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            #[serde(flatten)]
            rest: BTreeMap<String, Vec<Rat>>,
        }
        let raw = Raw::deserialize(d)?;
        let kind = match raw.kind.as_str() {
            "qp" => ChartKind::Qp,
            "geometric" => ChartKind::Geometric,
            "lax" => ChartKind::Lax,
            "isospectral" => ChartKind::Isospectral,
            other => return Err(D::Error::custom(format!("unknown chart kind {other}"))),
        };
        let (k1, k2) = kind.keys();
        let take = |key: &str| {
            raw.rest
                .get(key)
                .cloned()
                .ok_or_else(|| D::Error::custom(format!("missing field {key}")))
        };
        Chart::new(kind, take(k1)?, take(k2)?).map_err(D::Error::custom)
    }
}

/// Companion-form connection together with the data that assembled it.
#[derive(Clone, Debug)]
pub struct OperData {
    /// L = [[0, 1], [L₂,₁, L₂,₂]]
    pub l: Mat2<RatFunc>,
    /// isomonodromic oper coefficients H∞,0 … H∞,r∞−4
    pub oper_coeffs: Vec<Rat>,
    /// trace polynomial (equals Tr of the normalized representative)
    pub tr_poly: UniPoly,
    /// irregular-times part of the determinant
    pub det_poly: UniPoly,
    /// Lagrange interpolant through (qᵢ, −pᵢ)
    pub lagrange: UniPoly,
    pub g0: Rat,
    pub times: IrregularTimes,
    pub chart: Chart,
}

/// Trace polynomial P̃₁(λ) = −Σ_{j=0}^{r∞−2} t∞,2j+2 λʲ.
pub fn tr_poly(times: &IrregularTimes) -> UniPoly {
    let r = times.r_inf();
    let coeffs = (0..=r - 2).map(|j| -times.t(2 * j + 2)).collect();
    UniPoly::from_coeffs(coeffs)
}

/// ∂P̃₁/∂t∞,k: −λ^(k/2−1) for even k, zero otherwise.
pub fn tr_poly_dt(times: &IrregularTimes, k: usize) -> UniPoly {
    let r = times.r_inf();
    if k.is_multiple_of(2) && k >= 2 && k <= 2 * r - 2 {
        UniPoly::monomial(Rat::from_int(-1), k / 2 - 1)
    } else {
        UniPoly::zero()
    }
}

/// Coefficient of λ^k in the determinant polynomial P̃₂, as the quadratic
/// time sum ¼ Σ (−1)^j t∞,j t∞,2k−j+4 over the admissible j range. The
/// bottom coefficient k = r∞−3 additionally carries ½t∞,2r∞−2 (formally the
/// j = 0 term with weight t∞,0 = 2 from the constant monodromy): without it
/// the eigenvalue expansion of the assembled connection reads back a wrong
/// t∞,1 whenever t∞,2r∞−2 ≠ 0, breaking the time round-trip.
fn det_poly_coeff(times: &IrregularTimes, k: usize) -> Rat {
    let r = times.r_inf();
    let n = 2 * r - 2;
    let quarter = Rat::new(1, 4);
    let mut acc = Rat::zero();
    let (lo, hi) = if k == r - 3 {
        acc += &(&Rat::from_int(2) * times.t(2 * r - 2));
        (1usize, 2 * r - 3)
    } else {
        ((2 * k + 6).saturating_sub(2 * r).max(1), n)
    };
    for j in lo..=hi {
        let idx = (2 * k + 4).checked_sub(j);
        let Some(idx) = idx else { continue };
        if idx < 1 || idx > n {
            continue;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let term = &(times.t(j) * times.t(idx)) * &Rat::from_int(sign);
        acc += &term;
    }
    &acc * &quarter
}

/// Determinant polynomial P̃₂(λ) = Σ_{k=r∞−3}^{2r∞−4} coeff·λ^k.
pub fn det_poly(times: &IrregularTimes) -> UniPoly {
    let r = times.r_inf();
    let mut coeffs = vec![Rat::zero(); 2 * r - 3];
    for k in (r - 3)..=(2 * r - 4) {
        coeffs[k] = det_poly_coeff(times, k);
    }
    UniPoly::from_coeffs(coeffs)
}

/// ∂P̃₂/∂t∞,m by the product rule on the quadratic sums.
pub fn det_poly_dt(times: &IrregularTimes, m: usize) -> UniPoly {
    let r = times.r_inf();
    let n = 2 * r - 2;
    let quarter = Rat::new(1, 4);
    let mut coeffs = vec![Rat::zero(); 2 * r - 3];
    for k in (r - 3)..=(2 * r - 4) {
        let (lo, hi) = if k == r - 3 {
            (1usize, 2 * r - 3)
        } else {
            ((2 * k + 6).saturating_sub(2 * r).max(1), n)
        };
        let mut acc = Rat::zero();
        if k == r - 3 && m == 2 * r - 2 {
            acc = Rat::from_int(2);
        }
        for j in lo..=hi {
            let Some(idx) = (2 * k + 4).checked_sub(j) else {
                continue;
            };
            if idx < 1 || idx > n {
                continue;
            }
            let sign = Rat::from_int(if j % 2 == 0 { 1 } else { -1 });
            if j == m {
                acc += &(&sign * times.t(idx));
            }
            if idx == m {
                acc += &(&sign * times.t(j));
            }
        }
        coeffs[k] = &acc * &quarter;
    }
    UniPoly::from_coeffs(coeffs)
}

/// Lagrange interpolant Q(λ) = −Σ pᵢ Π_{j≠i} (λ−qⱼ)/(qᵢ−qⱼ); satisfies
/// Q(qᵢ) = −pᵢ.
pub fn lagrange_interpolant(q: &[Rat], p: &[Rat]) -> Result<UniPoly> {
    assert_eq!(q.len(), p.len());
    let mut acc = UniPoly::zero();
    for i in 0..q.len() {
        let mut num = UniPoly::one();
        let mut den = Rat::one();
        for j in 0..q.len() {
            if j == i {
                continue;
            }
            if q[i] == q[j] {
                return Err(Error::CoincidentNodes { i: j, j: i });
            }
            num = &num * &UniPoly::from_coeffs(vec![-&q[j], Rat::one()]);
            den = &den * &(&q[i] - &q[j]);
        }
        let scale = &(-&p[i]) / &den;
        acc = &acc + &num.scale(&scale);
    }
    Ok(acc)
}

/// g₀ = ½t∞,2r∞−4 + ½t∞,2r∞−2·Σqⱼ. The leading-block identity
/// −g₀ − ½t∞,2r∞−2·Q_{r∞−4} = −½t∞,2r∞−4 with Q_{r∞−4} = −Σqⱼ pins the
/// second time index to 2r∞−2.
pub fn g0(times: &IrregularTimes, q: &[Rat]) -> Rat {
    let r = times.r_inf();
    let half = Rat::new(1, 2);
    let sum_q = q.iter().fold(Rat::zero(), |acc, x| &acc + x);
    &(&half * times.t(2 * r - 4)) + &(&(&half * times.t(2 * r - 2)) * &sum_q)
}

/// Isomonodromic oper coefficients H∞,k from the transposed Vandermonde
/// system Σ_k H_k qᵢ^k = pᵢ² − P̃₁(qᵢ)pᵢ + P̃₂(qᵢ) + ħ Σ_{j≠i}(pⱼ−pᵢ)/(qᵢ−qⱼ).
pub fn oper_coeffs(chart: &Chart, times: &IrregularTimes) -> Result<Vec<Rat>> {
    let q = chart.q();
    let p = chart.p();
    let g = q.len();
    if g == 0 {
        return Ok(vec![]);
    }
    let p1 = tr_poly(times);
    let p2 = det_poly(times);
    let hbar = times.hbar();
    let mut rhs = Vec::with_capacity(g);
    for i in 0..g {
        let mut v = &(&p[i] * &p[i]) - &(&p1.eval(&q[i]) * &p[i]);
        v += &p2.eval(&q[i]);
        let mut coupling = Rat::zero();
        for j in 0..g {
            if j != i {
                coupling += &(&(&p[j] - &p[i]) / &(&q[i] - &q[j]));
            }
        }
        v += &(hbar * &coupling);
        rhs.push(v);
    }
    vandermonde_solve(q, &rhs, true)
}

/// Assemble the companion connection L = [[0,1],[L₂,₁,L₂,₂]] with
/// L₂,₂ = P̃₁ + Σ ħ/(λ−qⱼ) and
/// L₂,₁ = −P̃₂ + Σ H∞,k λ^k − Σ pⱼ/(λ−qⱼ).
pub fn build_oper(chart: &Chart, times: &IrregularTimes) -> Result<OperData> {
    if chart.g() != times.genus() {
        return Err(Error::Dimension(format!(
            "chart genus {} vs r∞−3 = {}",
            chart.g(),
            times.genus()
        )));
    }
    let q = chart.q();
    let p = chart.p();
    let h = oper_coeffs(chart, times)?;
    let p1 = tr_poly(times);
    let p2 = det_poly(times);
    let hbar = times.hbar();

    let mut l22 = RatFunc::from_poly(p1.clone());
    for qi in q {
        l22 = &l22 + &RatFunc::simple_pole(hbar.clone(), qi);
    }
    let mut l21 = RatFunc::from_poly(&UniPoly::from_coeffs(h.clone()) - &p2);
    for (qi, pi) in q.iter().zip(p) {
        l21 = &l21 - &RatFunc::simple_pole(pi.clone(), qi);
    }
    let l = Mat2::new(RatFunc::zero(), RatFunc::one(), l21, l22);
    Ok(OperData {
        l,
        oper_coeffs: h,
        tr_poly: p1,
        det_poly: p2,
        lagrange: lagrange_interpolant(q, p)?,
        g0: g0(times, q),
        times: times.clone(),
        chart: chart.clone(),
    })
}

/// The gauge matrix G = [[1, 0], [−Q(λ) − (½t∞,2r∞−2·λ + g₀)·Π(λ−qⱼ), Π(λ−qⱼ)]].
/// Its second row equals the first row of the normalized connection, and
/// det G = Π(λ−qⱼ).
pub fn gauge_matrix(chart: &Chart, times: &IrregularTimes) -> Result<Mat2<UniPoly>> {
    let q = chart.q();
    let r = times.r_inf();
    let prod = UniPoly::from_roots(q);
    let lag = lagrange_interpolant(q, chart.p())?;
    let line = UniPoly::from_coeffs(vec![
        g0(times, q),
        &Rat::new(1, 2) * times.t(2 * r - 2),
    ]);
    let lower_left = &(-&lag) - &(&line * &prod);
    Ok(Mat2::new(UniPoly::one(), UniPoly::zero(), lower_left, prod))
}

fn mat2_inverse(m: &Mat2<RatFunc>) -> Mat2<RatFunc> {
    let det = m.det();
    assert!(!det.is_zero(), "singular gauge matrix");
    let inv = det.recip();
    Mat2::new(
        &m.e[1][1] * &inv,
        &(-&m.e[0][1]) * &inv,
        &(-&m.e[1][0]) * &inv,
        &m.e[0][0] * &inv,
    )
}

fn mat2_derivative(m: &Mat2<RatFunc>) -> Mat2<RatFunc> {
    m.map(RatFunc::derivative)
}

/// Undo the oper gauge: L̃ = G⁻¹·L·G − G⁻¹·∂λG, computed over rational
/// functions. On well-formed input every entry comes out polynomial and the
/// normalized blocks appear; any failure surfaces in validation.
pub fn gauge_backward(oper: &OperData) -> Result<TwistedConnection> {
    let g = gauge_matrix(&oper.chart, &oper.times)?;
    let g_rf = g.map(|p| RatFunc::from_poly(p.clone()));
    let g_inv = mat2_inverse(&g_rf);
    let entries = g_inv
        .mul(&oper.l)
        .mul(&g_rf)
        .sub(&g_inv.mul(&mat2_derivative(&g_rf)));
    Ok(TwistedConnection {
        entries,
        times: oper.times.clone(),
        chart: Some(oper.chart.clone()),
    })
}

/// Apply the oper gauge to a normalized connection:
/// L = G·L̃·G⁻¹ + (∂λG)·G⁻¹.
pub fn gauge_forward(conn: &TwistedConnection, g: &Mat2<UniPoly>) -> Mat2<RatFunc> {
    let g_rf = g.map(|p| RatFunc::from_poly(p.clone()));
    let g_inv = mat2_inverse(&g_rf);
    g_rf.mul(&conn.entries)
        .mul(&g_inv)
        .add(&mat2_derivative(&g_rf).mul(&g_inv))
}

/// Build the normalized connection straight from a qp chart.
pub fn build_connection(chart: &Chart, times: &IrregularTimes) -> Result<TwistedConnection> {
    gauge_backward(&build_oper(chart, times)?)
}

/// Recover the qp chart of a connection: q are the rational roots of the
/// (1,2) entry, pᵢ = [L̃(qᵢ)]₁,₁. Roots must be rational and simple.
pub fn apparent_singularities(conn: &TwistedConnection) -> Result<Chart> {
    let ur = conn.upper_right()?;
    let q = ur.rational_roots()?;
    for i in 0..q.len() {
        for j in (i + 1)..q.len() {
            if q[i] == q[j] {
                return Err(Error::CoincidentNodes { i, j });
            }
        }
    }
    let ul = conn.upper_left()?;
    let p = q.iter().map(|qi| ul.eval(qi)).collect();
    Chart::qp(q, p)
}
