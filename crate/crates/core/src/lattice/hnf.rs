//! Fraction-free rank computation and row Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Exact rank over ℚ (Bareiss elimination).
pub fn rank(vectors: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = vectors.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0usize;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Row-style Hermite normal form of the ℤ-span of `vectors` (nonzero rows only):
/// echelon form with positive pivots and entries above each pivot reduced modulo it.
pub fn hermite_rows(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if m.is_empty() {
        return m;
    }
    let cols = m[0].len();
    let mut r = 0usize;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // fold every lower row into row r with extended gcd steps
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            if m[r][c].is_zero() {
                m.swap(r, i);
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let ag = &a / &g;
            let bg = &b / &g;
            let (ra, ri) = (m[r].clone(), m[i].clone());
            for j in 0..cols {
                m[r][j] = &x * &ra[j] + &y * &ri[j];
                m[i][j] = &ag * &ri[j] - &bg * &ra[j];
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for v in m[r].iter_mut() {
                *v = -&*v;
            }
        }
        let p = m[r][c].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&p);
            if !q.is_zero() {
                let row = m[r].clone();
                for (a, b) in m[i].iter_mut().zip(&row) {
                    *a -= &q * b;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|v| v.iter().any(|x| !x.is_zero()));
    m
}

/// Integer coefficients expressing `q` in the rows of a Hermite form, if any.
pub fn solve_in_span(hermite: &[Vec<BigInt>], q: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = q.to_vec();
    let mut coeffs = Vec::with_capacity(hermite.len());
    for row in hermite {
        let c = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (t, rem) = rest[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return None;
        }
        if !t.is_zero() {
            for (a, b) in rest.iter_mut().zip(row) {
                *a -= &t * b;
            }
        }
        coeffs.push(t);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int_vec;

    #[test]
    fn ranks() {
        assert_eq!(rank(&[int_vec(&[2, 0, -1]), int_vec(&[4, 0, -2])]), 1);
        assert_eq!(
            rank(&[
                int_vec(&[2, 0, -1]),
                int_vec(&[0, 9, -1]),
                int_vec(&[1024, 0, -513])
            ]),
            3
        );
    }

    #[test]
    fn hermite_membership() {
        let h = hermite_rows(&[int_vec(&[1, 3, 0]), int_vec(&[0, 0, 1])]);
        let c = solve_in_span(&h, &int_vec(&[2, 6, -1])).unwrap();
        assert_eq!(c, int_vec(&[2, -1]));
        let h2 = hermite_rows(&[int_vec(&[2, 0, 0]), int_vec(&[0, 2, 0])]);
        assert!(solve_in_span(&h2, &int_vec(&[1, 1, 0])).is_none());
        let h3 = hermite_rows(&[int_vec(&[4, 6]), int_vec(&[6, 9]), int_vec(&[2, 5])]);
        // span is generated by (2,1) and (0,2)
        assert!(solve_in_span(&h3, &int_vec(&[2, 5])).is_some());
        assert!(solve_in_span(&h3, &int_vec(&[1, 0])).is_none());
    }
}
