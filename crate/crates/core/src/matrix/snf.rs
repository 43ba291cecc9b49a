use num_bigint::Sign;
use serde::Serialize;

use super::ExactMatrix;
use crate::ring::{Ring, RingElement};

/// `U * A * V = S` with `U`, `V` unimodular and `S` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub u: ExactMatrix,
    pub s: ExactMatrix,
    pub v: ExactMatrix,
}

impl SnfResult {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.s.main_diagonal().iter().take_while(|d| !d.is_zero()).count()
    }
}

struct Work {
    ring: Ring,
    s: Vec<Vec<RingElement>>,
    u: Option<Vec<Vec<RingElement>>>,
    // Stored transposed so column operations become row operations.
    vt: Option<Vec<Vec<RingElement>>>,
}

fn identity_rows(ring: Ring, n: usize) -> Vec<Vec<RingElement>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect()
}

fn axpy(rows: &mut [Vec<RingElement>], target: usize, src: usize, q: &RingElement) {
    // rows[target] -= q * rows[src]
    let (t, s) = if target < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x = &*x - &(q * y);
        }
    }
}

/// Euclidean quotient; over Z it rounds to nearest so remainders stay small.
fn quotient(a: &RingElement, b: &RingElement) -> RingElement {
    let (q, r) = a.div_rem(b);
    if let (Some(rv), Some(bv)) = (r.as_bigint(), b.as_bigint()) {
        let twice = rv.magnitude() * 2u32;
        if &twice > bv.magnitude() {
            let step = if (rv.sign() == Sign::Minus) == (bv.sign() == Sign::Minus) { 1 } else { -1 };
            return &q + &a.ring().from_i64(step);
        }
    }
    q
}

impl Work {
    fn rows(&self) -> usize {
        self.s.len()
    }

    fn cols(&self) -> usize {
        self.s.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.s.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.s {
            row.swap(i, j);
        }
        if let Some(vt) = &mut self.vt {
            vt.swap(i, j);
        }
    }

    /// row_target -= q * row_src
    fn row_axpy(&mut self, target: usize, src: usize, q: &RingElement) {
        axpy(&mut self.s, target, src, q);
        if let Some(u) = &mut self.u {
            axpy(u, target, src, q);
        }
    }

    /// col_target -= q * col_src
    fn col_axpy(&mut self, target: usize, src: usize, q: &RingElement) {
        for row in &mut self.s {
            if !row[src].is_zero() {
                row[target] = &row[target] - &(q * &row[src]);
            }
        }
        if let Some(vt) = &mut self.vt {
            axpy(vt, target, src, q);
        }
    }

    fn scale_row(&mut self, i: usize, unit: &RingElement) {
        for x in &mut self.s[i] {
            *x = &*x * unit;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = &*x * unit;
            }
        }
    }

    /// Pivot for the trailing block at `t`: smallest size first, then the
    /// fewest other nonzeros in its row and column to limit fill-in.
    #[allow(clippy::needless_range_loop)]
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = (self.rows(), self.cols());
        let mut row_count = vec![0usize; m];
        let mut col_count = vec![0usize; n];
        for i in t..m {
            for j in t..n {
                if !self.s[i][j].is_zero() {
                    row_count[i] += 1;
                    col_count[j] += 1;
                }
            }
        }
        let mut best: Option<((u64, usize), (usize, usize))> = None;
        for i in t..m {
            if row_count[i] == 0 {
                continue;
            }
            for j in t..n {
                let e = &self.s[i][j];
                if e.is_zero() {
                    continue;
                }
                let key = (e.size_bound(), (row_count[i] - 1) * (col_count[j] - 1));
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, (i, j)));
                }
            }
        }
        best.map(|(_, at)| at)
    }

    fn run(&mut self) {
        let (m, n) = (self.rows(), self.cols());
        for t in 0..m.min(n) {
            // Each pass moves the smallest entry of the block to (t, t) and
            // reduces its row and column; leftovers are strictly smaller.
            loop {
                let Some((pi, pj)) = self.find_pivot(t) else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..m {
                    if !self.s[i][t].is_zero() {
                        let q = quotient(&self.s[i][t], &self.s[t][t]);
                        self.row_axpy(i, t, &q);
                        clean &= self.s[i][t].is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.s[t][j].is_zero() {
                        let q = quotient(&self.s[t][j], &self.s[t][t]);
                        self.col_axpy(j, t, &q);
                        clean &= self.s[t][j].is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                // Pivot must divide the remaining block for the divisibility chain.
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.s[i][j].is_divisible_by(&self.s[t][t])));
                match offender {
                    Some(i) => {
                        let minus_one = -&self.ring.one();
                        self.row_axpy(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            let unit = self.s[t][t].normalizing_unit();
            if !unit.is_one() {
                self.scale_row(t, &unit);
            }
        }
    }
}

fn to_matrix(ring: Ring, rows: Vec<Vec<RingElement>>, cols: usize) -> ExactMatrix {
    ExactMatrix::from_rows(ring, rows, cols).expect("rectangular")
}

fn run_snf(a: &ExactMatrix, track_u: bool, track_v: bool) -> Work {
    let ring = a.ring();
    let mut w = Work {
        ring,
        s: (0..a.rows()).map(|i| a.row(i).to_vec()).collect(),
        u: track_u.then(|| identity_rows(ring, a.rows())),
        vt: track_v.then(|| identity_rows(ring, a.cols())),
    };
    if a.cols() > 0 {
        w.run();
    }
    w
}

/// Smith normal form with both transformation matrices.
pub fn smith_normal_form(a: &ExactMatrix) -> SnfResult {
    let ring = a.ring();
    let w = run_snf(a, true, true);
    let s = to_matrix(ring, w.s, a.cols());
    let u = to_matrix(ring, w.u.unwrap(), a.rows());
    let v = to_matrix(ring, w.vt.unwrap(), a.cols()).transpose();
    SnfResult { u, s, v }
}

/// The nonzero diagonal of the Smith form (unit-normalized, divisibility chain).
pub(crate) fn diagonal_invariants(a: &ExactMatrix) -> Vec<RingElement> {
    let w = run_snf(a, false, false);
    (0..a.rows().min(a.cols())).map(|i| w.s[i][i].clone()).take_while(|d| !d.is_zero()).collect()
}

/// Columns spanning the kernel of `a` (a free module; the columns are a basis).
pub fn kernel(a: &ExactMatrix) -> ExactMatrix {
    let ring = a.ring();
    let w = run_snf(a, false, true);
    let rank = (0..a.rows().min(a.cols())).take_while(|&i| !w.s[i][i].is_zero()).count();
    let vt = w.vt.unwrap();
    let cols: Vec<Vec<RingElement>> = vt.into_iter().skip(rank).collect();
    ExactMatrix::from_columns(ring, a.cols(), &cols)
}

/// Some `x` with `a * x = b`, if one exists over the ring.
pub fn solve(a: &ExactMatrix, b: &[RingElement]) -> Option<Vec<RingElement>> {
    let rhs = ExactMatrix::from_columns(a.ring(), a.rows(), &[b.to_vec()]);
    solve_columns(a, &rhs).map(|x| x.column(0))
}

/// Solves `a * X = b` column by column with one factorization.
pub fn solve_columns(a: &ExactMatrix, b: &ExactMatrix) -> Option<ExactMatrix> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let ring = a.ring();
    let snf = smith_normal_form(a);
    let ub = &snf.u * b;
    let rank = snf.rank();
    let mut y = ExactMatrix::zeros(ring, a.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..a.rows() {
            let rhs = ub.get(i, j);
            if i < rank {
                y.set(i, j, rhs.div_exact(snf.s.get(i, i))?);
            } else if !rhs.is_zero() {
                return None;
            }
        }
    }
    Some(&snf.v * &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &ExactMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(&(&r.u * a) * &r.v, r.s);
        assert!(r.u.determinant().unwrap().is_unit());
        assert!(r.v.determinant().unwrap().is_unit());
        assert!(r.s.is_diagonal());
        let d = r.s.main_diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_divisible_by(&w[0]));
        }
        assert!(d.iter().all(|e| e.is_normalized()));
        r
    }

    #[test]
    fn diag_two_three() {
        let z = Ring::Integers;
        let r = check(&ExactMatrix::from_i64_rows(z, &[&[2, 0], &[0, 3]]));
        assert_eq!(r.s.main_diagonal(), vec![z.from_i64(1), z.from_i64(6)]);
    }

    #[test]
    fn zero_matrix() {
        let z = Ring::Integers;
        let a = ExactMatrix::zeros(z, 2, 3);
        let r = check(&a);
        assert_eq!(r.s, a);
        assert_eq!(r.u, ExactMatrix::identity(z, 2));
        assert_eq!(r.v, ExactMatrix::identity(z, 3));
    }

    #[test]
    fn already_diagonal_over_f5() {
        let f5 = Ring::PolyOverPrimeField(5);
        let t = f5.variable().unwrap();
        let a = ExactMatrix::diagonal(f5, 2, 2, &[t.clone(), t.pow(2)]);
        let r = check(&a);
        assert_eq!(r.s.main_diagonal(), vec![t.clone(), t.pow(2)]);
    }

    #[test]
    fn empty_dimensions() {
        let z = Ring::Integers;
        check(&ExactMatrix::zeros(z, 0, 3));
        check(&ExactMatrix::zeros(z, 3, 0));
        check(&ExactMatrix::zeros(z, 0, 0));
    }

    #[test]
    fn kernel_and_solve() {
        let z = Ring::Integers;
        let a = ExactMatrix::from_i64_rows(z, &[&[2, 4, 6], &[1, 2, 3]]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        let b = vec![z.from_i64(4), z.from_i64(2)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.apply(&x), b);
        assert!(solve(&a, &[z.from_i64(1), z.from_i64(1)]).is_none());
        let a = ExactMatrix::from_i64_rows(z, &[&[2]]);
        assert!(solve(&a, &[z.from_i64(3)]).is_none());
    }

    #[test]
    fn scrambled_entries_stay_small() {
        let z = Ring::Integers;
        let a = ExactMatrix::from_i64_rows(
            z,
            &[
                &[2250, -4500, 2250, -4500],
                &[4500, -8998, 3825, -8325],
                &[0, 0, 24, 0],
                &[0, 0, -675, 675],
                &[2250, -4500, 2250, -4500],
                &[0, 0, 0, 0],
                &[4500, -9000, 3150, -7650],
            ],
        );
        let r = check(&a);
        let d: Vec<RingElement> = [1, 6, 450, 27000].iter().map(|&v| z.from_i64(v)).collect();
        assert_eq!(&r.s.main_diagonal()[..4], &d[..]);
    }
}
