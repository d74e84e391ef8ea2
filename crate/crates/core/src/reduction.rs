//! Symplectic reduction: the deformation-basis change into trivial and
//! isomonodromic directions, trivial/isomonodromic times and their exact
//! inversion, shifted Darboux coordinates, the trivialization checks behind
//! the reduction of the fundamental 2-form, and the reduced (Painlevé I
//! hierarchy) Hamiltonian.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    dense_rank, toeplitz_unit_inverse_coeffs, vandermonde_solve, Rat, UniPoly,
};
use crate::connection::IrregularTimes;
use crate::deformation::{flow_rates, general_hamiltonian, DeformationVector};
use crate::error::{Error, Result};
use crate::oper::{tr_poly, tr_poly_dt, Chart};

/// Isomonodromic times τ₁…τ_g together with the trivial times
/// (T∞,1…T∞,r∞−1, T₁, T₂). The square root of T₂ is carried explicitly so
/// the fractional powers in the time change stay rational.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReducedTimes {
    r_inf: usize,
    tau: Vec<Rat>,
    t_even: Vec<Rat>,
    t1: Rat,
    t2_sqrt: Rat,
}

impl ReducedTimes {
    /// The canonical slice: every trivial time zero, T₂ = 1.
    pub fn canonical(r_inf: usize, tau: Vec<Rat>) -> Result<Self> {
        if tau.len() != r_inf - 3 {
            return Err(Error::Dimension(format!(
                "expected {} isomonodromic times, got {}",
                r_inf - 3,
                tau.len()
            )));
        }
        Ok(ReducedTimes {
            r_inf,
            tau,
            t_even: vec![Rat::zero(); r_inf - 1],
            t1: Rat::zero(),
            t2_sqrt: Rat::one(),
        })
    }

    pub fn new(
        r_inf: usize,
        tau: Vec<Rat>,
        t_even: Vec<Rat>,
        t1: Rat,
        t2_sqrt: Rat,
    ) -> Result<Self> {
        if tau.len() != r_inf - 3 || t_even.len() != r_inf - 1 {
            return Err(Error::Dimension("trivial/isomonodromic time lengths".into()));
        }
        if t2_sqrt.is_zero() {
            return Err(Error::InvalidTimes("T₂ must be nonzero".into()));
        }
        Ok(ReducedTimes {
            r_inf,
            tau,
            t_even,
            t1,
            t2_sqrt,
        })
    }

    pub fn r_inf(&self) -> usize {
        self.r_inf
    }

    pub fn tau(&self) -> &[Rat] {
        &self.tau
    }

    /// T∞,k = t∞,2k for 1 ≤ k ≤ r∞−1.
    pub fn t_even(&self, k: usize) -> &Rat {
        &self.t_even[k - 1]
    }

    pub fn t1(&self) -> &Rat {
        &self.t1
    }

    pub fn t2(&self) -> Rat {
        &self.t2_sqrt * &self.t2_sqrt
    }

    pub fn t2_sqrt(&self) -> &Rat {
        &self.t2_sqrt
    }

    pub fn is_canonical(&self) -> bool {
        self.t_even.iter().all(Rat::is_zero) && self.t1.is_zero() && self.t2() == Rat::one()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Json<'a> {
            tau: &'a [Rat],
            canonical: bool,
        }
        serde_json::to_string(&Json {
            tau: &self.tau,
            canonical: self.is_canonical(),
        })
        .expect("serializable")
    }
}

/// Trivial basis vector w_k = e_{2k}, 1 ≤ k ≤ r∞−1.
pub fn w_vector(r_inf: usize, k: usize) -> DeformationVector {
    assert!((1..=r_inf - 1).contains(&k));
    DeformationVector::basis(r_inf, 2 * k)
}

/// Basis vector u_k = ½ Σ_{r=1}^{2r∞−2k−4} r·t∞,r+2k+2·e_r for
/// −1 ≤ k ≤ r∞−3; u₋₁ and u₀ are trivial, u₁…u_{r∞−3} isomonodromic.
pub fn u_vector(times: &IrregularTimes, k: i64) -> DeformationVector {
    let r = times.r_inf() as i64;
    assert!((-1..=r - 3).contains(&k));
    let mut alpha = vec![Rat::zero(); 2 * times.r_inf() - 2];
    let top = 2 * r - 2 * k - 4;
    for idx in 1..=top {
        let t_index = (idx + 2 * k + 2) as usize;
        let weight = &Rat::new(idx, 2) * times.t(t_index);
        alpha[(idx - 1) as usize] = weight;
    }
    DeformationVector::from_components(times.r_inf(), alpha).expect("length fixed")
}

/// Rank of the assembled (w, u) family; full rank 2r∞−2 whenever
/// t∞,2r∞−3 ≠ 0.
pub fn basis_rank(times: &IrregularTimes) -> usize {
    let r = times.r_inf();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for k in 1..=r - 1 {
        rows.push(w_vector(r, k).components().to_vec());
    }
    for k in -1..=(r as i64 - 3) {
        rows.push(u_vector(times, k).components().to_vec());
    }
    dense_rank(&rows)
}

fn odd_product(lo: i64, hi: i64, f: impl Fn(i64) -> i64) -> Rat {
    let mut acc = Rat::one();
    for m in lo..=hi {
        acc = &acc * &Rat::from_int(f(m));
    }
    acc
}

fn factorial(n: i64) -> Rat {
    let mut acc = Rat::one();
    for i in 2..=n {
        acc = &acc * &Rat::from_int(i);
    }
    acc
}

/// Coefficient δ(i,j) of τ_j inside t∞,2i−1 (without the overall 2·T₂^{(2i−1)/2}):
/// Π_{m=j+1}^{r∞−i−2}(2r∞−2m−5) / (2^{r∞−i−j−2}·(r∞−i−j−2)!).
fn delta_coeff(r_inf: usize, i: usize, j: usize) -> Rat {
    let r = r_inf as i64;
    let (i, j) = (i as i64, j as i64);
    let num = odd_product(j + 1, r - i - 2, |m| 2 * r - 2 * m - 5);
    let pw = r - i - j - 2;
    &num / &(&Rat::from_int(2).pow(pw) * &factorial(pw))
}

/// Coefficient γ(i) of T₁^{r∞−1−i} inside t∞,2i−1:
/// Π_{m=0}^{r∞−i−2}(2r∞−2m−5) / (2^{r∞−1−i}·(r∞−1−i)!).
fn gamma_coeff(r_inf: usize, i: usize) -> Rat {
    let r = r_inf as i64;
    let i = i as i64;
    let num = odd_product(0, r - i - 2, |m| 2 * r - 2 * m - 5);
    let pw = r - 1 - i;
    &num / &(&Rat::from_int(2).pow(pw) * &factorial(pw))
}

/// Split an irregular-time vector into trivial and isomonodromic times.
/// Exactness requires ½t∞,2r∞−3 to be a perfect (2r∞−3)-rd rational power;
/// otherwise T₂ is irrational and the input is rejected.
pub fn times_forward(times: &IrregularTimes) -> Result<ReducedTimes> {
    let r = times.r_inf();
    let half_lead = &Rat::new(1, 2) * times.t(2 * r - 3);
    let Some(w) = half_lead.odd_root_exact((2 * r - 3) as u32) else {
        return Err(Error::IrrationalPower(format!(
            "(t_{}/2) = {half_lead} is not a perfect {}-rd power",
            2 * r - 3,
            2 * r - 3
        )));
    };
    let t_even: Vec<Rat> = (1..=r - 1).map(|k| times.t(2 * k).clone()).collect();
    let m = (2 * r - 5) as i64;
    let t1 = &(times.t(2 * r - 5) / &Rat::from_int(m)) / &w.pow(m);
    let half = Rat::new(1, 2);
    let mut tau = Vec::with_capacity(r - 3);
    for k in 1..=r - 3 {
        let ki = k as i64;
        let mut acc = Rat::zero();
        for i in 0..=(k as i64 - 1) {
            let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
            let prod = odd_product(1, i, |s| 2 * (r as i64) - 2 * ki + 2 * s - 7);
            let t1pow = (&half * times.t(2 * r - 5)).pow(i);
            let wexp = -((2 * (r as i64) - 3) * i + 2 * (r as i64) - 5 - 2 * ki);
            let tfac = &half * times.t((2 * (r as i64) - 5 - 2 * ki + 2 * i) as usize);
            let den = &factorial(i) * &Rat::from_int(m).pow(i);
            acc += &(&(&(&(&(&sign * &prod) * &t1pow) * &w.pow(wexp)) * &tfac) / &den);
        }
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        let prod = odd_product(1, ki, |s| 2 * (r as i64) - 2 * ki + 2 * s - 7);
        let t1pow = (&half * times.t(2 * r - 5)).pow(ki + 1);
        let wexp = -(ki + 1) * m;
        let den = &(&Rat::from_int(ki + 1) * &factorial(ki - 1)) * &Rat::from_int(m).pow(ki);
        acc += &(&(&(&(&sign * &prod) * &t1pow) * &w.pow(wexp)) / &den);
        tau.push(acc);
    }
    ReducedTimes::new(r, tau, t_even, t1, w)
}

/// Rebuild the irregular times from trivial and isomonodromic ones:
/// t∞,2k = T∞,k, t∞,2r∞−3 = 2·T₂^{(2r∞−3)/2}, t∞,2r∞−5 = (2r∞−5)T₁T₂^{(2r∞−5)/2}
/// and, for 1 ≤ k ≤ r∞−3,
/// t∞,2k−1 = 2T₂^{(2k−1)/2}·(Σ_p δ(k,p)T₁^{r∞−k−p−2}τ_p + γ(k)T₁^{r∞−1−k}).
pub fn times_backward(reduced: &ReducedTimes, hbar: Rat) -> Result<IrregularTimes> {
    let r = reduced.r_inf();
    let w = reduced.t2_sqrt();
    let mut t = vec![Rat::zero(); 2 * r - 2];
    for k in 1..=r - 1 {
        t[2 * k - 1] = reduced.t_even(k).clone();
    }
    t[2 * r - 3 - 1] = &Rat::from_int(2) * &w.pow((2 * r - 3) as i64);
    t[2 * r - 5 - 1] =
        &(&Rat::from_int((2 * r - 5) as i64) * reduced.t1()) * &w.pow((2 * r - 5) as i64);
    for k in 1..=r - 3 {
        let mut acc = Rat::zero();
        for p in 1..=r - k - 2 {
            if p > r - 3 {
                continue; // τ indices stop at g
            }
            let coeff = delta_coeff(r, k, p);
            let t1pow = reduced.t1().pow((r - k - p - 2) as i64);
            acc += &(&(&coeff * &t1pow) * &reduced.tau()[p - 1]);
        }
        acc += &(&gamma_coeff(r, k) * &reduced.t1().pow((r - 1 - k) as i64));
        t[2 * k - 1 - 1] = &(&Rat::from_int(2) * &w.pow((2 * k - 1) as i64)) * &acc;
    }
    IrregularTimes::new(r, t, hbar)
}

/// Shifted Darboux coordinates q̌ = T₂q + T₁, p̌ = T₂⁻¹(p − ½P̃₁(q)).
pub fn shift_coordinates(chart: &Chart, times: &IrregularTimes) -> Result<Chart> {
    let reduced = times_forward(times)?;
    let t2 = reduced.t2();
    let t1 = reduced.t1();
    let p1 = tr_poly(times);
    let half = Rat::new(1, 2);
    let q: Vec<Rat> = chart.q().iter().map(|qj| &(&t2 * qj) + t1).collect();
    let p: Vec<Rat> = chart
        .q()
        .iter()
        .zip(chart.p())
        .map(|(qj, pj)| &(pj - &(&half * &p1.eval(qj))) / &t2)
        .collect();
    Chart::qp(q, p)
}

/// Inverse of `shift_coordinates` at the same times.
pub fn unshift_coordinates(shifted: &Chart, times: &IrregularTimes) -> Result<Chart> {
    let reduced = times_forward(times)?;
    let t2 = reduced.t2();
    let t1 = reduced.t1();
    let p1 = tr_poly(times);
    let half = Rat::new(1, 2);
    let q: Vec<Rat> = shifted.q().iter().map(|qj| &(qj - t1) / &t2).collect();
    let p: Vec<Rat> = q
        .iter()
        .zip(shifted.p())
        .map(|(qj, pj)| &(&t2 * pj) + &(&half * &p1.eval(qj)))
        .collect();
    Chart::qp(q, p)
}

/// The isomonodromic direction α^{τ_j}: components
/// δ(i,j)·T₁^{r∞−i−j−2}·T₂^{(2i−1)/2} on e_{2i−1} for 1 ≤ i ≤ r∞−j−2.
/// At the canonical slice this is e_{2r∞−2j−5}. (The full tangent ∂τ_j
/// carries twice these components; the Hamiltonian normalization used
/// throughout matches this halved vector.)
pub fn tau_direction(reduced: &ReducedTimes, j: usize) -> DeformationVector {
    let r = reduced.r_inf();
    assert!((1..=r - 3).contains(&j));
    let w = reduced.t2_sqrt();
    let mut alpha = vec![Rat::zero(); 2 * r - 2];
    for i in 1..=r - j - 2 {
        let coeff = &(&delta_coeff(r, i, j) * &reduced.t1().pow((r - i - j - 2) as i64))
            * &w.pow((2 * i - 1) as i64);
        alpha[2 * i - 1 - 1] = coeff;
    }
    DeformationVector::from_components(r, alpha).expect("length fixed")
}

/// Derivative of a trivial time along a deformation direction, by the chain
/// rule through the explicit time dependence (rate ħ·α).
struct TrivialRates {
    t2_dot: Rat,
    t1_dot: Rat,
}

fn trivial_rates(alpha: &DeformationVector, times: &IrregularTimes) -> TrivialRates {
    let r = times.r_inf();
    let hbar = times.hbar();
    let w = times_forward(times).expect("admissible times").t2_sqrt().clone();
    let m = (2 * r - 5) as i64;
    let lead = (2 * r - 3) as i64;
    // ∂T₂/∂t_{2r∞−3} = w^{−(2r∞−5)}/(2r∞−3)
    let t2_dot = &(&(hbar * alpha.component(2 * r - 3)) * &w.pow(-m)) / &Rat::from_int(lead);
    // ∂T₁/∂t_{2r∞−5} = w^{−(2r∞−5)}/(2r∞−5),
    // ∂T₁/∂t_{2r∞−3} = −t_{2r∞−5}·w^{−(4r∞−8)}/(2(2r∞−3))
    let part5 = &(&(hbar * alpha.component(2 * r - 5)) * &w.pow(-m)) / &Rat::from_int(m);
    let part3 = &(&(&(hbar * alpha.component(2 * r - 3)) * times.t(2 * r - 5))
        * &w.pow(-(4 * r as i64 - 8)))
        / &Rat::from_int(-2 * lead);
    TrivialRates {
        t2_dot,
        t1_dot: &part5 + &part3,
    }
}

/// Flow of the shifted coordinates along a direction, by the chain rule:
/// 𝓛[q̌] = 𝓛[T₂]q + T₂q̇ + 𝓛[T₁] and
/// 𝓛[p̌] = −𝓛[T₂]T₂⁻²(p − ½P̃₁(q)) + T₂⁻¹(ṗ − ½𝓛[P̃₁](q) − ½P̃₁′(q)q̇).
pub fn shifted_flow(
    alpha: &DeformationVector,
    chart: &Chart,
    times: &IrregularTimes,
) -> Result<(Vec<Rat>, Vec<Rat>)> {
    let r = times.r_inf();
    let reduced = times_forward(times)?;
    let t2 = reduced.t2();
    let rates = flow_rates(alpha, chart, times)?;
    let triv = trivial_rates(alpha, times);
    let p1 = tr_poly(times);
    let dp1 = p1.derivative();
    // explicit time variation of P̃₁ along the flow
    let mut p1_dot = UniPoly::zero();
    for k in 1..=2 * r - 2 {
        let rate = &rates.t_dot[k - 1];
        if !rate.is_zero() {
            p1_dot = &p1_dot + &tr_poly_dt(times, k).scale(rate);
        }
    }
    let half = Rat::new(1, 2);
    let mut qdot = Vec::new();
    let mut pdot = Vec::new();
    for j in 0..chart.g() {
        let qj = &chart.q()[j];
        let pj = &chart.p()[j];
        qdot.push(&(&(&triv.t2_dot * qj) + &(&t2 * &rates.q_dot[j])) + &triv.t1_dot);
        let centered = pj - &(&half * &p1.eval(qj));
        let first = &(&(-&triv.t2_dot) * &centered) / &(&t2 * &t2);
        let inner = &(&rates.p_dot[j] - &(&half * &p1_dot.eval(qj)))
            - &(&(&half * &dp1.eval(qj)) * &rates.q_dot[j]);
        pdot.push(&first + &(&inner / &t2));
    }
    Ok((qdot, pdot))
}

/// Verify that every trivial direction (w₁…w_{r∞−1}, u₋₁, u₀) leaves the
/// shifted coordinates fixed, and that the unshifted coordinates follow the
/// primitive evolutions 𝓛_{w_k}[q]=0, 𝓛_{w_k}[p]=−ħ/2·q^{k−1},
/// 𝓛_{u₋₁}[q]=−ħq, 𝓛_{u₋₁}[p]=ħp, 𝓛_{u₀}[q]=−ħ, 𝓛_{u₀}[p]=0.
pub fn trivial_flow_check(chart: &Chart, times: &IrregularTimes) -> Result<()> {
    let r = times.r_inf();
    let hbar = times.hbar();
    let fail = |direction: &str, index: usize, what: &str, got: &Rat| {
        Err(Error::Normalization {
            place: format!("trivial flow {direction}, coordinate {index}"),
            detail: format!("{what} = {got}, expected it to match"),
        })
    };
    let mut directions: Vec<(String, DeformationVector)> = (1..=r - 1)
        .map(|k| (format!("w_{k}"), w_vector(r, k)))
        .collect();
    directions.push(("u_{-1}".into(), u_vector(times, -1)));
    directions.push(("u_0".into(), u_vector(times, 0)));

    for (name, alpha) in &directions {
        // primitive evolutions of the raw coordinates
        let rates = flow_rates(alpha, chart, times)?;
        for j in 0..chart.g() {
            let qj = &chart.q()[j];
            let pj = &chart.p()[j];
            let (want_q, want_p) = if let Some(k) = name.strip_prefix("w_") {
                let k: i64 = k.parse().unwrap();
                (Rat::zero(), &(&Rat::new(-1, 2) * hbar) * &qj.pow(k - 1))
            } else if name == "u_{-1}" {
                (-&(hbar * qj), hbar * pj)
            } else {
                (-hbar, Rat::zero())
            };
            if rates.q_dot[j] != want_q {
                return fail(name, j + 1, "flow of q", &rates.q_dot[j]);
            }
            if rates.p_dot[j] != want_p {
                return fail(name, j + 1, "flow of p", &rates.p_dot[j]);
            }
        }
        // trivialized flows of the shifted coordinates
        let (qdot, pdot) = shifted_flow(alpha, chart, times)?;
        for j in 0..chart.g() {
            if !qdot[j].is_zero() {
                return fail(name, j + 1, "flow of shifted q", &qdot[j]);
            }
            if !pdot[j].is_zero() {
                return fail(name, j + 1, "flow of shifted p", &pdot[j]);
            }
        }
    }
    Ok(())
}

/// Computational core of the 2-form reduction: (a) the Hamiltonians in the
/// trivial directions take their closed forms (so they vanish in shifted
/// coordinates, where the trivial flows are zero), (b) the α-coefficients
/// relating ∂τ_k to the odd time directions match the exact derivative of
/// the inverse time map, (c) the trivial Hamiltonians scale linearly in ħ.
pub fn two_form_reduction_check(chart: &Chart, times: &IrregularTimes) -> Result<()> {
    let r = times.r_inf();
    let fail = |place: String, detail: String| Err(Error::Normalization { place, detail });
    // (a) closed forms of the trivial-direction Hamiltonians
    for hbar_int in [0i64, 1, 2] {
        let hb = Rat::from_int(hbar_int);
        let scaled = times.with_hbar(hb.clone());
        for k in 1..=r - 1 {
            let ham = general_hamiltonian(&w_vector(r, k), chart, &scaled)?;
            let want = chart
                .q()
                .iter()
                .fold(Rat::zero(), |a, qj| &a + &qj.pow(k as i64))
                .scale_by(&(&hb / &Rat::from_int(2 * k as i64)));
            if ham != want {
                return fail(
                    format!("Ham in direction w_{k} at hbar={hbar_int}"),
                    format!("got {ham}, closed form {want}"),
                );
            }
        }
        let ham_m1 = general_hamiltonian(&u_vector(&scaled, -1), chart, &scaled)?;
        let want_m1 = chart
            .q()
            .iter()
            .zip(chart.p())
            .fold(Rat::zero(), |a, (q, p)| &a + &(q * p))
            .scale_by(&(-&hb));
        if ham_m1 != want_m1 {
            return fail(
                format!("Ham in direction u_-1 at hbar={hbar_int}"),
                format!("got {ham_m1}, closed form {want_m1}"),
            );
        }
        let ham_0 = general_hamiltonian(&u_vector(&scaled, 0), chart, &scaled)?;
        let want_0 = chart
            .p()
            .iter()
            .fold(Rat::zero(), |a, p| &a + p)
            .scale_by(&(-&hb));
        if ham_0 != want_0 {
            return fail(
                format!("Ham in direction u_0 at hbar={hbar_int}"),
                format!("got {ham_0}, closed form {want_0}"),
            );
        }
    }
    // (b) displayed α^{τ_k} coefficients against the exact (linear) map τ ↦ t
    let reduced = times_forward(times)?;
    for j in 1..=r - 3 {
        let alpha = tau_direction(&reduced, j);
        let mut bumped = reduced.clone();
        let eps = Rat::new(1, 7);
        bumped.tau[j - 1] = &bumped.tau[j - 1] + &eps;
        let t0 = times_backward(&reduced, times.hbar().clone())?;
        let t1 = times_backward(&bumped, times.hbar().clone())?;
        for k in 1..=2 * r - 2 {
            let derivative = &(&(t1.t(k) - t0.t(k)) / &eps) / &Rat::from_int(2);
            if derivative != *alpha.component(k) {
                return fail(
                    format!("alpha^tau_{j} component {k}"),
                    format!("exact derivative/2 {derivative} vs displayed {}", alpha.component(k)),
                );
            }
        }
    }
    // (c) trivial flows of shifted coordinates vanish
    trivial_flow_check(chart, times)
}

/// Reduced determinant polynomial at the canonical slice:
/// P̃₂ = −λ^{2r∞−5} − Σ_{k=r∞−2}^{2r∞−7}(2τ_{2r∞−k−6} + Σ_m τ·τ)λ^k
///      − (2τ_{r∞−3} + Σ_{m=3}^{r∞−3} τ_{r∞−m−2}τ_{m−2})λ^{r∞−3},
/// with P̃₂ = −λ for r∞ = 3.
pub fn reduced_det_poly(tau: &[Rat], r_inf: usize) -> UniPoly {
    let r = r_inf;
    if r == 3 {
        return UniPoly::monomial(Rat::from_int(-1), 1);
    }
    let mut coeffs = vec![Rat::zero(); 2 * r - 4];
    coeffs[2 * r - 5] = Rat::from_int(-1);
    let tau_at = |i: usize| -> Rat {
        if (1..=r - 3).contains(&i) {
            tau[i - 1].clone()
        } else {
            Rat::zero()
        }
    };
    if 2 * r >= 7 + r - 2 {
        for k in (r - 2)..=(2 * r - 7) {
            let mut acc = &Rat::from_int(2) * &tau_at(2 * r - k - 6);
            let lo = k + 6 - r;
            for m in lo..=(r - 3) {
                acc += &(&tau_at(r - m - 2) * &tau_at(r - k + m - 5));
            }
            coeffs[k] = -&acc;
        }
    }
    let mut last = &Rat::from_int(2) * &tau_at(r - 3);
    for m in 3..=(r - 3) {
        last += &(&tau_at(r - m - 2) * &tau_at(m - 2));
    }
    coeffs[r - 3] = -&last;
    UniPoly::from_coeffs(coeffs)
}

/// Reduced ν-vector for the isomonodromic direction α^{τ_j} at the
/// canonical slice: (ν∞,1 … ν∞,r∞−3) solving the unit lower-triangular
/// τ-Toeplitz system with right-hand side e_j/(2r∞−2j−5), via the
/// combinatorial inverse.
pub fn reduced_nu(tau: &[Rat], j: usize, r_inf: usize) -> Vec<Rat> {
    let g = r_inf - 3;
    assert!((1..=g).contains(&j));
    let f = toeplitz_unit_inverse_coeffs(tau);
    let scale = Rat::new(1, (2 * r_inf - 2 * j - 5) as i64);
    (1..=g)
        .map(|k| {
            if k == j {
                scale.clone()
            } else if k >= j + 2 {
                &f[k - j - 2] * &scale
            } else {
                Rat::zero()
            }
        })
        .collect()
}

/// Reduced oper coefficients at the canonical slice: the Vandermonde system
/// with right-hand side p̌ᵢ² + P̃₂(q̌ᵢ) + ħ Σ_{l≠i}(p̌_l−p̌ᵢ)/(q̌ᵢ−q̌_l).
pub fn reduced_oper_coeffs(tau: &[Rat], chart: &Chart, hbar: &Rat) -> Result<Vec<Rat>> {
    let g = chart.g();
    if g == 0 {
        return Ok(vec![]);
    }
    let p2 = reduced_det_poly(tau, g + 3);
    let q = chart.q();
    let p = chart.p();
    let mut rhs = Vec::with_capacity(g);
    for i in 0..g {
        let mut v = &(&p[i] * &p[i]) + &p2.eval(&q[i]);
        let mut coupling = Rat::zero();
        for l in 0..g {
            if l != i {
                coupling += &(&(&p[l] - &p[i]) / &(&q[i] - &q[l]));
            }
        }
        v += &(hbar * &coupling);
        rhs.push(v);
    }
    vandermonde_solve(q, &rhs, true)
}

/// Reduced Hamiltonian of the hierarchy in the τ_j direction:
/// Ham = Σ_k ν∞,k+1^{(α^{τ_j})} H∞,k.
pub fn reduced_hamiltonian(tau: &[Rat], chart: &Chart, j: usize, hbar: &Rat) -> Result<Rat> {
    let r_inf = chart.g() + 3;
    let nu = reduced_nu(tau, j, r_inf);
    let h = reduced_oper_coeffs(tau, chart, hbar)?;
    let mut ham = Rat::zero();
    for (k, hk) in h.iter().enumerate() {
        ham += &(&nu[k] * hk);
    }
    Ok(ham)
}

/// Symbolic form of the first hierarchy member (r∞ = 4): the Hamiltonian and
/// the eliminated second-order flow as polynomials in (q, p, τ₁),
/// reconstructed from the exact pipeline by interpolation on a rational
/// grid (degrees ≤ 3 in q, ≤ 2 in p, ≤ 1 in τ₁). The second component is
/// q̈ = d/dτ(∂Ham/∂p) = −2·∂Ham/∂q.
pub fn painleve_one_symbolic() -> Result<(crate::algebra::MultiPoly, crate::algebra::MultiPoly)> {
    use crate::algebra::{dense_solve, varset, MultiPoly};
    let vars = varset(&["q", "p", "tau1"]);
    let (dq, dp, dt) = (4usize, 3usize, 2usize);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for iq in 0..dq {
        for ip in 0..dp {
            for it in 0..dt {
                let (qv, pv, tv) = (
                    Rat::from_int(iq as i64),
                    Rat::from_int(ip as i64),
                    Rat::from_int(it as i64 + 1),
                );
                let chart = Chart::qp(vec![qv.clone()], vec![pv.clone()])?;
                rhs.push(reduced_hamiltonian(
                    std::slice::from_ref(&tv),
                    &chart,
                    1,
                    &Rat::one(),
                )?);
                let mut row = Vec::with_capacity(dq * dp * dt);
                for a in 0..dq {
                    for b in 0..dp {
                        for c in 0..dt {
                            row.push(
                                &(&qv.pow(a as i64) * &pv.pow(b as i64)) * &tv.pow(c as i64),
                            );
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let coeffs = dense_solve(&rows, &rhs)
        .ok_or_else(|| Error::Dimension("interpolation grid degenerate".into()))?;
    let mut ham = MultiPoly::zero(&vars);
    let mut idx = 0;
    for a in 0..dq {
        for b in 0..dp {
            for c in 0..dt {
                if !coeffs[idx].is_zero() {
                    ham.set_coeff(vec![a as u32, b as u32, c as u32], coeffs[idx].clone());
                }
                idx += 1;
            }
        }
    }
    let qddot = ham.partial("q").scale(&Rat::from_int(-2));
    Ok((ham, qddot))
}

trait ScaleBy {
    fn scale_by(&self, k: &Rat) -> Rat;
}
impl ScaleBy for Rat {
    fn scale_by(&self, k: &Rat) -> Rat {
        self * k
    }
}
