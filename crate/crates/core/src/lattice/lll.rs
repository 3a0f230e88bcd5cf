//! LLL reduction of integer row bases driven by an exact Gram matrix and a
//! floating Gram–Schmidt recomputed at every lazy size-reduction step.

use num_bigint::BigInt;
use num_traits::Zero;

use super::xfloat::{mul_shift, XFloat};

const DELTA: f64 = 0.99;
const ETA: f64 = 0.51;

pub struct LllStats {
    pub swaps: u64,
    pub converged: bool,
}

struct State {
    b: Vec<Vec<BigInt>>,
    g: Vec<Vec<BigInt>>,
    r: Vec<Vec<XFloat>>,
    mu: Vec<Vec<XFloat>>,
    s: Vec<XFloat>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl State {
    fn gx(&self, i: usize, j: usize) -> XFloat {
        XFloat::from_bigint(&self.g[i][j])
    }

    fn row(&mut self, k: usize) {
        for j in 0..k {
            let mut v = self.gx(k, j);
            for i in 0..j {
                v = v.sub(self.mu[j][i].mul(self.r[k][i]));
            }
            self.r[k][j] = v;
            self.mu[k][j] = v.div(self.r[j][j]);
        }
        let mut s = self.gx(k, k);
        self.s[0] = s;
        for j in 0..k {
            s = s.sub(self.mu[k][j].mul(self.r[k][j]));
            self.s[j + 1] = s;
        }
        self.r[k][k] = s;
    }

    /// `b_k -= (m 2^sh) b_j`, updating the Gram matrix exactly.
    fn sub_mul(&mut self, k: usize, j: usize, m: i64, sh: u64) {
        let d = self.b.len();
        let gkj = self.g[k][j].clone();
        let gjj = self.g[j][j].clone();
        let t1 = mul_shift(&gkj, m, sh);
        let t2 = mul_shift(&mul_shift(&gjj, m, sh), m, sh);
        let gkk = &self.g[k][k] - (&t1 << 1u32) + t2;
        for i in 0..d {
            if i == k {
                continue;
            }
            let v = &self.g[k][i] - mul_shift(&self.g[j][i], m, sh);
            self.g[k][i] = v.clone();
            self.g[i][k] = v;
        }
        self.g[k][k] = gkk;
        let bj = self.b[j].clone();
        for (x, y) in self.b[k].iter_mut().zip(&bj) {
            if !y.is_zero() {
                *x -= mul_shift(y, m, sh);
            }
        }
    }

    fn swap(&mut self, k: usize) {
        self.b.swap(k - 1, k);
        self.g.swap(k - 1, k);
        for row in self.g.iter_mut() {
            row.swap(k - 1, k);
        }
    }
}

/// Reduces the rows of `basis` in place (rows must be linearly independent).
pub fn lll_reduce(basis: &mut Vec<Vec<BigInt>>, max_loops: u64) -> LllStats {
    let d = basis.len();
    if d <= 1 {
        return LllStats {
            swaps: 0,
            converged: true,
        };
    }
    let g: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| dot(&basis[i], &basis[j])).collect())
        .collect();
    let mut st = State {
        b: std::mem::take(basis),
        g,
        r: vec![vec![XFloat::ZERO; d]; d],
        mu: vec![vec![XFloat::ZERO; d]; d],
        s: vec![XFloat::ZERO; d + 1],
    };
    st.r[0][0] = st.gx(0, 0);
    let eta = XFloat::from_f64(ETA);
    let mut k = 1usize;
    let mut loops = 0u64;
    let mut swaps = 0u64;
    let mut converged = true;
    while k < d {
        loops += 1;
        if loops > max_loops {
            converged = false;
            break;
        }
        // lazy size reduction
        let mut guard = 0;
        loop {
            st.row(k);
            let big = (0..k).any(|j| eta.cmp_abs(st.mu[k][j]).is_lt());
            if !big {
                break;
            }
            guard += 1;
            if guard > 10_000 {
                converged = false;
                break;
            }
            let mut mus: Vec<XFloat> = st.mu[k][..k].to_vec();
            for j in (0..k).rev() {
                let (m, sh) = mus[j].round_int();
                if m == 0 {
                    continue;
                }
                st.sub_mul(k, j, m, sh);
                let x = XFloat::from_mant_shift(m, sh);
                for i in 0..j {
                    mus[i] = mus[i].sub(x.mul(st.mu[j][i]));
                }
                mus[j] = mus[j].sub(x);
            }
        }
        if !converged {
            break;
        }
        let lhs = st.r[k - 1][k - 1].scale(DELTA);
        if st.s[k - 1].lt(lhs) {
            st.swap(k);
            swaps += 1;
            if k - 1 == 0 {
                st.r[0][0] = st.gx(0, 0);
            } else {
                st.row(k - 1);
            }
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    *basis = st.b;
    LllStats { swaps, converged }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int_vec;

    #[test]
    fn reduces_a_knapsack_lattice() {
        let mut b = vec![
            int_vec(&[1, 0, 0, 1345]),
            int_vec(&[0, 1, 0, 35]),
            int_vec(&[0, 0, 1, 154]),
        ];
        lll_reduce(&mut b, 10_000);
        for row in &b {
            let n2: BigInt = row.iter().map(|x| x * x).sum();
            assert!(n2 < BigInt::from(200));
        }
    }

    #[test]
    fn huge_entries_are_reduced() {
        let two = BigInt::from(1) << 3000u32;
        let a = &two / BigInt::from(3);
        let mut b = vec![
            vec![BigInt::from(1), a.clone()],
            vec![BigInt::from(0), two.clone()],
        ];
        let stats = lll_reduce(&mut b, 1_000_000);
        assert!(stats.converged);
        // det = 2^3000, so the first vector has about 1500 bits
        assert!(b[0].iter().all(|x| x.bits() <= 1510));
    }
}
