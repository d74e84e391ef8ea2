//! Exact structured linear solvers: lower-triangular Toeplitz systems, the
//! combinatorial inverse of the unit shifted-Toeplitz matrix, Vandermonde
//! systems (Björck–Pereyra), and a dense Gaussian fallback for the small
//! unstructured systems that appear in coordinate changes.

use crate::algebra::Rat;
use crate::error::{Error, Result};

/// Solve M·x = rhs where M is lower-triangular Toeplitz with the given first
/// column, by forward substitution.
pub fn toeplitz_lower_solve(first_column: &[Rat], rhs: &[Rat]) -> Result<Vec<Rat>> {
    if first_column.len() != rhs.len() {
        return Err(Error::Dimension(format!(
            "column length {} vs rhs length {}",
            first_column.len(),
            rhs.len()
        )));
    }
    let n = rhs.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let diag = &first_column[0];
    if diag.is_zero() {
        return Err(Error::SingularDiagonal);
    }
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = rhs[i].clone();
        for j in 0..i {
            acc -= &(&first_column[i - j] * &x[j]);
        }
        x.push(&acc / diag);
    }
    Ok(x)
}

/// First-column entries (F₁, …, Fₙ) of the inverse of the unit
/// lower-triangular Toeplitz matrix whose first column is (1, 0, τ₁, τ₂, …):
/// the first nonzero subdiagonal sits at offset 2. Each Fᵢ is the multinomial
/// sum over exponent vectors (b₁, …, bᵢ) with Σ (j+1)·bⱼ = i+1 of
/// (−1)^Σbⱼ · multinomial(Σbⱼ; b) · τ₁^b₁ ⋯ τᵢ^bᵢ.
pub fn toeplitz_unit_inverse_coeffs(subdiagonal: &[Rat]) -> Vec<Rat> {
    let n = subdiagonal.len();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut total = Rat::zero();
        let mut exps = vec![0u32; i];
        sum_compositions(subdiagonal, &mut exps, 0, (i + 1) as u32, &mut total);
        out.push(total);
    }
    out
}

/// Accumulate the multinomial terms for every (b₁..b_i) with Σ (j+1)bⱼ = target.
fn sum_compositions(taus: &[Rat], exps: &mut Vec<u32>, pos: usize, remaining: u32, total: &mut Rat) {
    if pos == exps.len() {
        if remaining == 0 {
            *total = &*total + &multinomial_term(taus, exps);
        }
        return;
    }
    let weight = (pos + 2) as u32; // variable τ_{pos+1} carries weight pos+2
    let max_b = remaining / weight;
    for b in 0..=max_b {
        exps[pos] = b;
        sum_compositions(taus, exps, pos + 1, remaining - b * weight, total);
    }
    exps[pos] = 0;
}

fn multinomial_term(taus: &[Rat], exps: &[u32]) -> Rat {
    let total: u32 = exps.iter().sum();
    // multinomial(total; exps) = total! / Π exps_j!
    let mut coeff = Rat::one();
    let mut used = 0u32;
    for &b in exps {
        for k in 1..=b {
            used += 1;
            coeff = &coeff * &Rat::new(used as i64, k as i64);
        }
    }
    let sign = if total.is_multiple_of(2) { 1 } else { -1 };
    let mut term = &coeff * &Rat::from_int(sign);
    for (j, &b) in exps.iter().enumerate() {
        if b > 0 {
            term = &term * &taus[j].pow(b as i64);
        }
    }
    term
}

/// Exact Vandermonde solve. The matrix has `V[i][j] = nodes[j]^i` (rows are
/// powers 0..n−1, nodes along columns). With `transposed` the system solved
/// is Vᵀ·x = rhs, which is polynomial interpolation through the nodes.
/// Björck–Pereyra recurrences, exact over the rationals.
pub fn vandermonde_solve(nodes: &[Rat], rhs: &[Rat], transposed: bool) -> Result<Vec<Rat>> {
    if nodes.len() != rhs.len() {
        return Err(Error::Dimension(format!(
            "{} nodes vs {} rhs entries",
            nodes.len(),
            rhs.len()
        )));
    }
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::CoincidentNodes { i, j });
            }
        }
    }
    let n = nodes.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut x = rhs.to_vec();
    if transposed {
        // Newton divided differences, then expand to monomial coefficients.
        for k in 0..n - 1 {
            for i in (k + 1..n).rev() {
                let num = &x[i] - &x[i - 1];
                let den = &nodes[i] - &nodes[i - k - 1];
                x[i] = &num / &den;
            }
        }
        for k in (0..n - 1).rev() {
            for i in k..n - 1 {
                let t = &nodes[k] * &x[i + 1];
                x[i] = &x[i] - &t;
            }
        }
    } else {
        for k in 0..n - 1 {
            for i in (k + 1..n).rev() {
                let t = &nodes[k] * &x[i - 1];
                x[i] = &x[i] - &t;
            }
        }
        for k in (0..n - 1).rev() {
            for i in k + 1..n {
                let den = &nodes[i] - &nodes[i - k - 1];
                x[i] = &x[i] / &den;
            }
            for i in k..n - 1 {
                let next = x[i + 1].clone();
                x[i] = &x[i] - &next;
            }
        }
    }
    Ok(x)
}

/// Dense exact Gaussian elimination with partial pivoting (by first nonzero).
/// Returns `None` when the matrix is singular.
pub fn dense_solve(matrix: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let n = rhs.len();
    assert!(matrix.len() == n && matrix.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Rat>> = matrix.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
                let t = &f * &b[col];
                b[r] = &b[r] - &t;
            }
        }
    }
    Some(b)
}

/// Exact rank of a rational matrix (rows × cols), by elimination.
pub fn dense_rank(matrix: &[Vec<Rat>]) -> usize {
    let mut a: Vec<Vec<Rat>> = matrix.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..cols {
            a[row][c] = &a[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    let t = &f * &a[row][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn toeplitz_diagonal_case() {
        let x = toeplitz_lower_solve(&[r(2), r(0), r(0)], &[r(5), r(7), r(9)]).unwrap();
        assert_eq!(x, vec![Rat::new(5, 2), Rat::new(7, 2), Rat::new(9, 2)]);
    }

    #[test]
    fn toeplitz_back_substitution() {
        // column (1, τ, 0), rhs e₁ → (1, −τ, τ²)
        let tau = Rat::new(3, 2);
        let x = toeplitz_lower_solve(&[r(1), tau.clone(), r(0)], &[r(1), r(0), r(0)]).unwrap();
        assert_eq!(x, vec![r(1), -&tau, &tau * &tau]);
    }

    #[test]
    fn toeplitz_zero_diagonal_rejected() {
        assert!(matches!(
            toeplitz_lower_solve(&[r(0), r(1)], &[r(1), r(1)]),
            Err(Error::SingularDiagonal)
        ));
    }

    #[test]
    fn unit_inverse_first_values() {
        let taus: Vec<Rat> = (1..=5).map(MultiTau::tau).collect();
        let f = toeplitz_unit_inverse_coeffs(&taus);
        // F₁ = −τ₁, F₂ = −τ₂, F₃ = τ₁²−τ₃, F₄ = 2τ₁τ₂−τ₄, F₅ = −τ₁³+2τ₁τ₃+τ₂²−τ₅
        let t = |i: usize| MultiTau::tau(i as i64);
        assert_eq!(f[0], -&t(1));
        assert_eq!(f[1], -&t(2));
        assert_eq!(f[2], &(&t(1) * &t(1)) - &t(3));
        assert_eq!(f[3], &(&(&r(2) * &t(1)) * &t(2)) - &t(4));
        let expect5 = &(&(&(-&(&(&t(1) * &t(1)) * &t(1))) + &(&(&r(2) * &t(1)) * &t(3)))
            + &(&t(2) * &t(2)))
            - &t(5);
        assert_eq!(f[4], expect5);
    }

    /// Distinct primes stand in for independent τ variables, so polynomial
    /// identities in the τ's can be checked numerically without collisions.
    struct MultiTau;
    impl MultiTau {
        fn tau(i: i64) -> Rat {
            let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23];
            Rat::new(primes[(i - 1) as usize], 1 + (i % 3))
        }
    }

    #[test]
    fn unit_inverse_matches_dense_inverse() {
        for n in 1..=9usize {
            let taus: Vec<Rat> = (1..=n as i64).map(MultiTau::tau).collect();
            let f = toeplitz_unit_inverse_coeffs(&taus);
            // build the (n+2)×(n+2) unit matrix with first column (1, 0, τ₁..τₙ)
            let dim = n + 2;
            let mut m = vec![vec![r(0); dim]; dim];
            for i in 0..dim {
                m[i][i] = r(1);
                for j in 0..i {
                    let off = i - j;
                    if off >= 2 {
                        m[i][j] = taus[off - 2].clone();
                    }
                }
            }
            // first column of the inverse solves M x = e₁
            let mut e1 = vec![r(0); dim];
            e1[0] = r(1);
            let x = dense_solve(&m, &e1).unwrap();
            assert_eq!(x[0], r(1));
            assert_eq!(x[1], r(0));
            for i in 0..n {
                assert_eq!(x[i + 2], f[i], "F_{} mismatch at size {}", i + 1, n);
            }
        }
    }

    #[test]
    fn vandermonde_single_node() {
        let x = vandermonde_solve(&[r(7)], &[r(5)], false).unwrap();
        assert_eq!(x, vec![r(5)]);
    }

    #[test]
    fn vandermonde_interpolation_two_nodes() {
        // H₀ + H₁ = 3, H₀ + 2H₁ = 8
        let x = vandermonde_solve(&[r(1), r(2)], &[r(3), r(8)], true).unwrap();
        assert_eq!(x, vec![r(-2), r(5)]);
    }

    #[test]
    fn vandermonde_coincident_nodes_rejected() {
        assert!(matches!(
            vandermonde_solve(&[r(1), r(1)], &[r(0), r(0)], false),
            Err(Error::CoincidentNodes { .. })
        ));
    }

    #[test]
    fn vandermonde_matches_dense_both_orientations() {
        let nodes: Vec<Rat> = vec![r(-3), Rat::new(1, 2), r(2), r(5), Rat::new(-7, 3)];
        let rhs: Vec<Rat> = vec![r(1), r(-4), Rat::new(2, 7), r(0), r(9)];
        let n = nodes.len();
        let mut v = vec![vec![r(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                v[i][j] = nodes[j].pow(i as i64);
            }
        }
        let x = vandermonde_solve(&nodes, &rhs, false).unwrap();
        assert_eq!(x, dense_solve(&v, &rhs).unwrap());
        let mut vt = vec![vec![r(0); n]; n];
        for i in 0..n {
            for j in 0..n {
                vt[i][j] = v[j][i].clone();
            }
        }
        let xt = vandermonde_solve(&nodes, &rhs, true).unwrap();
        assert_eq!(xt, dense_solve(&vt, &rhs).unwrap());
    }

    #[test]
    fn rank_of_rectangular() {
        let m = vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(0)],
        ];
        assert_eq!(dense_rank(&m), 2);
    }
}
