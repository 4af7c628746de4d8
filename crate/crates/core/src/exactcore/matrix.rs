//! Dense matrices over `F_p`: rank, right kernel and affine solves.
//!
//! All elimination goes through [`Echelon`], an incrementally maintained row
//! echelon form. Pivots are chosen as the leftmost nonzero column of each
//! incoming row, processed in insertion order, so results depend only on the
//! input matrix.

use super::field::{Elem, PrimeField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixF {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl MatrixF {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must be rows * cols");
        debug_assert!(data.iter().all(|&x| x < field.modulus()));
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self::new(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows given as signed integers (reduced mod p).
    pub fn from_i64_rows(field: PrimeField, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        Self::new(field, rows.len(), cols, data)
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: Vec<Vec<Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Self::new(field, n, cols, data)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        self.iter_rows().map(|r| self.field.dot(r, v)).collect()
    }

    pub fn mul(&self, other: &MatrixF) -> MatrixF {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = MatrixF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    f.add_mul_assign(dst, other.row(k), a);
                }
            }
        }
        out
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> MatrixF {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(cols.iter().map(|&j| r[j]));
        }
        MatrixF::new(self.field, self.rows, cols.len(), data)
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.cols);
        e.push_rows(self.iter_rows().map(|r| r.to_vec()));
        e
    }

    /// Rank over `F_p`.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().echelon().rank()
        } else {
            self.echelon().rank()
        }
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        self.echelon().kernel()
    }

    /// Basis of the left null space `{w : w^T M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Elem>> {
        self.transpose().kernel()
    }

    /// Solves `A x = b`. Returns a particular solution and a kernel basis, or
    /// [`Error::Infeasible`].
    pub fn solve_affine(&self, b: &[Elem]) -> Result<AffineSolution> {
        assert_eq!(b.len(), self.rows, "right-hand side length must equal row count");
        let f = self.field;
        let n = self.cols;
        let mut e = Echelon::new(f, n + 1);
        e.push_rows((0..self.rows).map(|i| {
            let mut r = Vec::with_capacity(n + 1);
            r.extend_from_slice(self.row(i));
            r.push(b[i]);
            r
        }));
        if e.pivots().last() == Some(&n) {
            return Err(Error::Infeasible("inconsistent right-hand side".into()));
        }
        let particular = e.back_substitute(None);
        let particular = particular[..n].to_vec();
        let kernel: Vec<Vec<Elem>> = e
            .kernel_excluding(&[n])
            .into_iter()
            .map(|mut v| {
                v.truncate(n);
                v
            })
            .collect();
        let check = self.mul_vec(&particular);
        if check != b {
            return Err(Error::CertificateFail("A x0 != b after affine solve".into()));
        }
        Ok(AffineSolution { particular, kernel })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Elem>,
    pub kernel: Vec<Vec<Elem>>,
}

/// Incrementally built row echelon form.
///
/// Every stored row is monic at its pivot and zero to the left of it; rows
/// are kept sorted by pivot column. Rows are not reduced above their pivots
/// unless [`Echelon::make_reduced`] is called.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    reduced: bool,
}

const BATCH: usize = 16;

impl Echelon {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        Self {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            reduced: true,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Reduces `v` against the stored rows; afterwards `v` is zero at every
    /// pivot column. Returns the leftmost nonzero column, if any.
    pub fn reduce(&self, v: &mut [Elem]) -> Option<usize> {
        debug_assert_eq!(v.len(), self.cols);
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                self.field.sub_mul_assign(&mut v[pc..], &row[pc..], c);
            }
        }
        v.iter().position(|&x| x != 0)
    }

    /// Coordinates of the reduction: returns `(remainder, coefficients)` with
    /// `v = remainder + sum_k coeff[k] * rows[k]`.
    pub fn reduce_with_coords(&self, v: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let mut r = v.to_vec();
        let mut coords = vec![0; self.rows.len()];
        for (k, (row, &pc)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let c = r[pc];
            if c != 0 {
                coords[k] = c;
                self.field.sub_mul_assign(&mut r[pc..], &row[pc..], c);
            }
        }
        (r, coords)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds a row; returns true when it enlarged the span.
    pub fn push(&mut self, mut v: Vec<Elem>) -> bool {
        match self.reduce(&mut v) {
            None => false,
            Some(pc) => {
                self.insert_reduced(v, pc);
                true
            }
        }
    }

    fn insert_reduced(&mut self, mut v: Vec<Elem>, pc: usize) {
        let inv = self.field.inv(v[pc]);
        self.field.scale_assign(&mut v[pc..], inv);
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        self.reduced = false;
    }

    /// Adds many rows. Rows are processed in blocks so each stored pivot row
    /// is streamed once per block instead of once per incoming row.
    pub fn push_rows<I: IntoIterator<Item = Vec<Elem>>>(&mut self, rows: I) -> usize {
        let mut added = 0;
        let mut batch: Vec<Vec<Elem>> = Vec::with_capacity(BATCH);
        for r in rows {
            debug_assert_eq!(r.len(), self.cols);
            batch.push(r);
            if batch.len() == BATCH {
                added += self.flush_batch(&mut batch);
            }
        }
        added += self.flush_batch(&mut batch);
        added
    }

    fn flush_batch(&mut self, batch: &mut Vec<Vec<Elem>>) -> usize {
        if batch.is_empty() {
            return 0;
        }
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            for v in batch.iter_mut() {
                let c = v[pc];
                if c != 0 {
                    f.sub_mul_assign(&mut v[pc..], &row[pc..], c);
                }
            }
        }
        // the existing pivots are cleared; finish sequentially inside the batch
        let mut fresh: Vec<(usize, Vec<Elem>)> = Vec::new();
        for mut v in batch.drain(..) {
            for (pc, row) in &fresh {
                let c = v[*pc];
                if c != 0 {
                    f.sub_mul_assign(&mut v[*pc..], &row[*pc..], c);
                }
            }
            if let Some(pc) = v.iter().position(|&x| x != 0) {
                let inv = f.inv(v[pc]);
                f.scale_assign(&mut v[pc..], inv);
                // keep earlier fresh rows free of this pivot so later rows in
                // the batch see a consistent (if unsorted) echelon set
                for (_, row) in fresh.iter_mut() {
                    let c = row[pc];
                    if c != 0 {
                        f.sub_mul_assign(&mut row[pc..], &v[pc..], c);
                    }
                }
                fresh.push((pc, v));
            }
        }
        let n = fresh.len();
        for (pc, v) in fresh {
            let at = self.pivots.partition_point(|&q| q < pc);
            self.pivots.insert(at, pc);
            self.rows.insert(at, v);
        }
        if n > 0 {
            self.reduced = false;
        }
        n
    }

    /// Clears every entry above each pivot (reduced row echelon form).
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        let f = self.field;
        for k in (0..self.rows.len()).rev() {
            let pc = self.pivots[k];
            let (above, rest) = self.rows.split_at_mut(k);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                let c = row[pc];
                if c != 0 {
                    f.sub_mul_assign(&mut row[pc..], &pivot_row[pc..], c);
                }
            }
        }
        self.reduced = true;
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Solution of the triangular system with every free variable zero except
    /// `free` (set to one). With `free = None` the last column is treated as
    /// an augmented right-hand side: returns `x` with `x[last] = -1` solving
    /// `[A | b] x = 0`, i.e. `A x[..n] = b`.
    fn back_substitute(&self, free: Option<usize>) -> Vec<Elem> {
        let f = self.field;
        let mut x = vec![0; self.cols];
        match free {
            Some(j) => x[j] = 1,
            None => x[self.cols - 1] = f.neg(1),
        }
        for (row, &pc) in self.rows.iter().zip(&self.pivots).rev() {
            let s = f.dot(&row[pc + 1..], &x[pc + 1..]);
            x[pc] = f.neg(s);
        }
        if free.is_none() {
            x[self.cols - 1] = 0;
        }
        x
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&j| !is_pivot[j]).collect()
    }

    /// Basis of the right null space, one vector per free column (in column
    /// order), each with a one at its free column and zeros at the others.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        self.kernel_excluding(&[])
    }

    fn kernel_excluding(&self, skip: &[usize]) -> Vec<Vec<Elem>> {
        let free: Vec<usize> = self.free_columns().into_iter().filter(|j| !skip.contains(j)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        if self.reduced || 2 * free.len() > self.rank() {
            let mut e = self.clone();
            e.make_reduced();
            let f = e.field;
            free.iter()
                .map(|&j| {
                    let mut v = vec![0; e.cols];
                    v[j] = 1;
                    for (row, &pc) in e.rows.iter().zip(&e.pivots) {
                        v[pc] = f.neg(row[j]);
                    }
                    for &s in skip {
                        v[s] = 0;
                    }
                    v
                })
                .collect()
        } else {
            free.iter().map(|&j| self.back_substitute(Some(j))).collect()
        }
    }

    /// Expands an echelon row set into a matrix (rows in pivot order).
    pub fn to_matrix(&self) -> MatrixF {
        MatrixF::from_rows(self.field, self.cols, self.rows.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn identity_rank_and_kernel() {
        let f = PrimeField::random(11);
        let id = MatrixF::identity(f, 3);
        assert_eq!(id.rank(), 3);
        assert!(id.kernel().is_empty());
    }

    #[test]
    fn zero_matrix() {
        let f = f7();
        let z = MatrixF::zeros(f, 2, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel().len(), 3);
        assert_eq!(MatrixF::zeros(f, 4, 1).rank(), 0);
    }

    #[test]
    fn proportional_rows() {
        let m = MatrixF::from_i64_rows(f7(), &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn single_row_kernel_over_f5() {
        let f = PrimeField::new(5).unwrap();
        let m = MatrixF::from_i64_rows(f, &[&[1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(m.mul_vec(v), vec![0]);
        }
    }

    #[test]
    fn affine_examples() {
        let f = f7();
        let id = MatrixF::identity(f, 3);
        let s = id.solve_affine(&[1, 5, 6]).unwrap();
        assert_eq!(s.particular, vec![1, 5, 6]);
        assert!(s.kernel.is_empty());

        let a = MatrixF::from_i64_rows(f, &[&[1, 1]]);
        let s = a.solve_affine(&[3]).unwrap();
        assert_eq!(a.mul_vec(&s.particular), vec![3]);
        assert_eq!(s.kernel.len(), 1);
        assert_eq!(a.mul_vec(&s.kernel[0]), vec![0]);

        let a = MatrixF::from_i64_rows(f, &[&[1], &[1]]);
        assert!(matches!(a.solve_affine(&[1, 2]), Err(Error::Infeasible(_))));
    }

    #[test]
    fn batch_and_single_pushes_agree() {
        let f = PrimeField::random(5);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        use rand::SeedableRng;
        let rows: Vec<Vec<u64>> = (0..70)
            .map(|i| {
                (0..40)
                    .map(|j| if (i * j) % 3 == 0 { f.random_elem(&mut rng) } else { 0 })
                    .collect()
            })
            .collect();
        let mut a = Echelon::new(f, 40);
        a.push_rows(rows.clone());
        let mut b = Echelon::new(f, 40);
        for r in rows {
            b.push(r);
        }
        a.make_reduced();
        b.make_reduced();
        assert_eq!(a.pivots(), b.pivots());
        assert_eq!(a.rows(), b.rows());
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, usize, Vec<u64>, u64)> {
        (1usize..9, 1usize..9, any::<u64>())
            .prop_flat_map(|(r, c, seed)| (Just(r), Just(c), proptest::collection::vec(0u64..4, r * c), Just(seed)))
    }

    proptest! {
        #[test]
        fn rank_plus_nullity((r, c, small, seed) in arb_matrix()) {
            let f = PrimeField::random(seed % 64);
            // small entries make rank deficiency common
            let m = MatrixF::new(f, r, c, small);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), c);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn affine_solution_is_consistent((r, c, small, seed) in arb_matrix()) {
            let f = PrimeField::random(seed % 64);
            let m = MatrixF::new(f, r, c, small);
            let x: Vec<u64> = (0..c as u64).map(|i| f.from_u64(i * 31 + seed % 97)).collect();
            let b = m.mul_vec(&x);
            let s = m.solve_affine(&b).unwrap();
            prop_assert_eq!(m.mul_vec(&s.particular), b);
            prop_assert_eq!(s.kernel.len(), c - m.rank());
        }
    }
}
