//! Exact Fincke–Pohst enumeration of all lattice vectors in a ball, using the
//! integral Gram–Schmidt data `d_i`, `λ_ij` (no rational or floating error).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::numeric::{ceil_div, floor_div, isqrt};

/// Integral Gram–Schmidt data of linearly independent rows.
pub struct IntegralGso {
    /// `d[0] = 1`, `d[i+1]` is the Gram determinant of the first `i+1` rows.
    pub d: Vec<BigInt>,
    /// `lambda[i][j] = d[j+1] * mu_ij` for `j < i`.
    pub lambda: Vec<Vec<BigInt>>,
}

pub fn integral_gso(rows: &[Vec<BigInt>]) -> Option<IntegralGso> {
    let r = rows.len();
    let mut d = vec![BigInt::from(1); r + 1];
    let mut lambda = vec![vec![BigInt::zero(); r]; r];
    for i in 0..r {
        for j in 0..=i {
            let mut u: BigInt = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            for k in 0..j {
                u = (&d[k + 1] * &u - &lambda[i][k] * &lambda[j][k]) / &d[k];
            }
            if j < i {
                lambda[i][j] = u;
            } else {
                if u.is_zero() {
                    return None;
                }
                d[i + 1] = u;
            }
        }
    }
    Some(IntegralGso { d, lambda })
}

pub enum Enumerated {
    /// Coefficient vectors `c` with `|Σ c_i b_i|² <= bound`, excluding zero.
    Points(Vec<Vec<BigInt>>),
    TooMany,
}

/// All nonzero integer combinations of `rows` with squared length at most `bound`.
/// Stops with `TooMany` after `max_points` hits or `max_nodes` visited nodes.
pub fn short_vectors(
    rows: &[Vec<BigInt>],
    bound: &BigInt,
    max_points: usize,
    max_nodes: u64,
) -> Option<Enumerated> {
    let gso = integral_gso(rows)?;
    let r = rows.len();
    let mut out = Vec::new();
    let mut c = vec![BigInt::zero(); r];
    let mut nodes = 0u64;
    // remaining budget per level as an unreduced fraction num/den
    let ok = descend(
        &gso,
        r,
        bound.clone(),
        BigInt::from(1),
        &mut c,
        &mut out,
        &mut nodes,
        max_points,
        max_nodes,
    );
    if !ok {
        return Some(Enumerated::TooMany);
    }
    Some(Enumerated::Points(out))
}

#[allow(clippy::too_many_arguments)]
fn descend(
    g: &IntegralGso,
    level: usize,
    rnum: BigInt,
    rden: BigInt,
    c: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
    nodes: &mut u64,
    max_points: usize,
    max_nodes: u64,
) -> bool {
    if level == 0 {
        if c.iter().any(|x| !x.is_zero()) {
            out.push(c.clone());
            if out.len() > max_points {
                return false;
            }
        }
        return true;
    }
    let l = level - 1;
    *nodes += 1;
    if *nodes > max_nodes {
        return false;
    }
    // B_l t_l^2 = (c_l d_{l+1} + s_l)^2 / (d_{l+1} d_l) with s_l = Σ_{j>l} c_j λ_jl
    let r = c.len();
    let mut s = BigInt::zero();
    for j in (l + 1)..r {
        if !c[j].is_zero() {
            s += &c[j] * &g.lambda[j][l];
        }
    }
    let dl1 = &g.d[l + 1];
    let dd = dl1 * &g.d[l];
    let lim2 = floor_div(&(&rnum * &dd), &rden);
    if lim2.is_negative() {
        return true;
    }
    let lim = isqrt(&lim2);
    let lo = ceil_div(&(-&lim - &s), dl1);
    let hi = floor_div(&(&lim - &s), dl1);
    let mut x = lo;
    while x <= hi {
        let t = &x * dl1 + &s;
        let t2 = &t * &t;
        // new budget: rnum/rden - t2/dd
        let nnum = &rnum * &dd - &t2 * &rden;
        if !nnum.is_negative() {
            let nd = &rden * &dd;
            let nn = nnum;
            c[l] = x.clone();
            if !descend(g, l, nn, nd, c, out, nodes, max_points, max_nodes) {
                c[l] = BigInt::zero();
                return false;
            }
        }
        x += 1;
    }
    c[l] = BigInt::zero();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int_vec;

    #[test]
    fn counts_points_of_z2_in_disc() {
        let rows = vec![int_vec(&[1, 0]), int_vec(&[0, 1])];
        let Some(Enumerated::Points(p)) = short_vectors(&rows, &BigInt::from(2), 100, 1000) else {
            panic!("expected points");
        };
        // (±1,0), (0,±1), (±1,±1)
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn skewed_basis_same_lattice() {
        let rows = vec![int_vec(&[1, 0]), int_vec(&[7, 1])];
        let Some(Enumerated::Points(p)) = short_vectors(&rows, &BigInt::from(1), 100, 1000) else {
            panic!("expected points");
        };
        assert_eq!(p.len(), 4);
    }
}
