//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! Vectors are columns; a matrix acts by `v ↦ m·v`. Subspaces are stored by
//! their reduced row echelon basis, which is unique, so two [`Subspace`]s are
//! equal exactly when they span the same space.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::LinalgError;
use crate::field::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: FieldSpec, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Kronecker product of two vectors, index `(i, j) ↦ i·len(b) + j`.
pub fn kron_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from its rows; all rows must have `cols` entries.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vector>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { field, rows: n, cols, data })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, cols, rows).expect("ragged integer matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        let mut out = zero_vector(self.field, self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !a.is_zero() {
                    o.add_mul(a, x);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { data, ..*self }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                a.add_mul(c, b);
            }
        }
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Self::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Stacks blocks vertically; all blocks need the same column count.
    pub fn vstack(field: FieldSpec, cols: usize, blocks: &[Matrix]) -> Matrix {
        let mut rows = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            rows.extend(b.row_vectors());
        }
        Matrix::from_rows(field, cols, rows).expect("checked column count")
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn rank(&self) -> usize {
        Subspace::from_vectors(self.field, self.cols, self.row_vectors()).dim()
    }

    /// Null space `{v : m·v = 0}`.
    pub fn kernel(&self) -> Subspace {
        kernel(self)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.field, self.rows, self.columns())
    }

    /// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let rows: Vec<Vector> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let (reduced, pivots) = rref(self.field, self.cols + 1, rows);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.field, self.cols);
        for (row, &p) in reduced.iter().zip(&pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vector(self.field, n, i));
                r
            })
            .collect();
        let (reduced, pivots) = rref(self.field, 2 * n, rows);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let inv_rows = reduced.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.field, n, inv_rows).expect("square"))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() })
            })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(Scalar::to_string).collect()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for row in self.to_strings() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of `rows` (each of length `cols`), returned with
/// its pivot columns. Zero rows are dropped.
pub fn rref(field: FieldSpec, cols: usize, rows: Vec<Vector>) -> (Vec<Vector>, Vec<usize>) {
    let mut e = Echelon::new(field, cols);
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

/// Incrementally built echelon basis with sparse rows.
///
/// Every stored row has leading entry 1 at its pivot column; rows are not
/// reduced against each other until [`Echelon::into_rref`].
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: FieldSpec, ambient: usize) -> Self {
        Echelon { field, ambient, rows: Vec::new(), pivot_row: vec![None; ambient] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Pivot column of every stored row, in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Remainder of `v` after elimination; zero iff `v` lies in the span.
    pub fn reduce(&self, mut v: Vector) -> Vector {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        for col in 0..self.ambient {
            if v[col].is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[col] {
                let c = -&v[col];
                for (j, x) in &self.rows[r] {
                    v[*j].add_mul(&c, x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v.to_vec()))
    }

    /// Adds `v` to the span. Returns the new normalized row if the dimension grew.
    pub fn insert(&mut self, v: Vector) -> Option<Vector> {
        let r = self.reduce(v);
        let lead = r.iter().position(|x| !x.is_zero())?;
        let inv = r[lead].inv().expect("nonzero leading entry");
        let dense: Vector = r.iter().map(|x| x * &inv).collect();
        let sparse = dense
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x.clone()))
            .collect();
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(sparse);
        Some(dense)
    }

    /// Canonical reduced row echelon basis, sorted by pivot.
    pub fn into_rref(self) -> (Vec<Vector>, Vec<usize>) {
        let field = self.field;
        let n = self.ambient;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        let mut reduced: Vec<Option<Vector>> = vec![None; self.rows.len()];
        for &r in order.iter().rev() {
            let mut v = zero_vector(field, n);
            for (j, x) in &self.rows[r] {
                v[*j] = x.clone();
            }
            let pivot = self.rows[r][0].0;
            for col in pivot + 1..n {
                if v[col].is_zero() {
                    continue;
                }
                if let Some(s) = self.pivot_row[col] {
                    let row_s = reduced[s].as_ref().expect("later pivots reduced first");
                    let c = -&v[col];
                    for (j, x) in row_s.iter().enumerate().skip(col) {
                        if !x.is_zero() {
                            v[j].add_mul(&c, x);
                        }
                    }
                }
            }
            reduced[r] = Some(v);
        }
        let pivots = order.iter().map(|&r| self.rows[r][0].0).collect();
        let basis = order.into_iter().map(|r| reduced[r].take().expect("reduced")).collect();
        (basis, pivots)
    }

    pub fn into_subspace(self) -> Subspace {
        let (field, ambient_dim) = (self.field, self.ambient);
        let (basis, pivots) = self.into_rref();
        Subspace { field, ambient_dim, basis, pivots }
    }
}

/// A linear subspace stored by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit_vector(field, ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn from_vectors(field: FieldSpec, ambient_dim: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut e = Echelon::new(field, ambient_dim);
        for v in vectors {
            e.insert(v);
        }
        e.into_subspace()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient_dim, &self.basis)
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.ambient_dim);
        for b in &self.basis {
            e.insert(b.clone());
        }
        e
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let mut v = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = -&v[p];
            for (j, x) in b.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    v[j].add_mul(&c, x);
                }
            }
        }
        is_zero_vector(&v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        Subspace::from_vectors(self.field, self.ambient_dim, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Functionals vanishing on the subspace, as the rows of a matrix whose
    /// kernel is exactly this subspace.
    pub fn annihilator(&self) -> Matrix {
        let rows = if self.basis.is_empty() {
            Matrix::zeros(self.field, 0, self.ambient_dim)
        } else {
            Matrix::from_rows(self.field, self.ambient_dim, self.basis.clone()).expect("basis rows")
        };
        let ann = kernel(&rows);
        Matrix::from_rows(self.field, self.ambient_dim, ann.basis).expect("kernel rows")
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient mismatch");
        let stacked = Matrix::vstack(self.field, self.ambient_dim, &[self.annihilator(), other.annihilator()]);
        kernel(&stacked)
    }

    /// `{u ⊗ w}` inside the Kronecker product of the ambient spaces.
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let vectors = self.basis.iter().flat_map(|u| other.basis.iter().map(move |w| kron_vectors(u, w)));
        Subspace::from_vectors(self.field, self.ambient_dim * other.ambient_dim, vectors.collect::<Vec<_>>())
    }

    pub fn image_under(&self, m: &Matrix) -> Subspace {
        Subspace::from_vectors(self.field, m.rows(), self.basis.iter().map(|b| m.mul_vec(b)).collect::<Vec<_>>())
    }

    /// True when `m` maps the subspace into itself.
    pub fn is_stable_under(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|b| self.contains(&m.mul_vec(b)))
    }

    /// Coordinates of `v` in this basis, `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {} over {}", self.dim(), self.ambient_dim, self.field)?;
        for b in &self.basis {
            let s: Vec<String> = b.iter().map(Scalar::to_string).collect();
            write!(f, "; [{}]", s.join(" "))?;
        }
        write!(f, ")")
    }
}

/// Null space of `m` acting on column vectors.
pub fn kernel(m: &Matrix) -> Subspace {
    let field = m.field();
    let n = m.cols();
    let (reduced, pivots) = rref(field, n, m.row_vectors());
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = unit_vector(field, n, free);
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        vectors.push(v);
    }
    Subspace::from_vectors(field, n, vectors)
}

/// Smallest subspace containing `seed` and closed under every operator.
pub fn span_closure(
    field: FieldSpec,
    ambient_dim: usize,
    seed: &[Vector],
    operators: &[Matrix],
) -> Result<Subspace, LinalgError> {
    for v in seed {
        if v.len() != ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: v.len() });
        }
    }
    for m in operators {
        if m.rows() != ambient_dim || m.cols() != ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: m.cols() });
        }
    }
    let ops: Vec<_> = operators.iter().map(|m| move |v: &[Scalar]| m.mul_vec(v)).collect();
    Ok(close_under(Echelon::new(field, ambient_dim), seed.to_vec(), &ops).into_subspace())
}

/// Extends `start` by `seed` and closes under the linear maps `ops`.
pub fn close_under<F>(mut span: Echelon, seed: Vec<Vector>, ops: &[F]) -> Echelon
where
    F: Fn(&[Scalar]) -> Vector,
{
    let mut queue: VecDeque<Vector> = seed.into();
    while let Some(v) = queue.pop_front() {
        if let Some(row) = span.insert(v) {
            for op in ops {
                queue.push_back(op(&row));
            }
        }
    }
    span
}

/// Coset representatives for `big / small` together with the projection onto
/// quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    reps: Vec<Vector>,
    projection: Matrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[Vector] {
        &self.reps
    }

    /// Matrix sending ambient vectors of `big` to quotient coordinates.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.projection.mul_vec(v)
    }

    /// Representative of the class with the given coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Vector {
        let field = self.projection.field();
        let mut v = zero_vector(field, self.projection.cols());
        for (c, r) in coords.iter().zip(&self.reps) {
            for (x, y) in v.iter_mut().zip(r) {
                x.add_mul(c, y);
            }
        }
        v
    }
}

/// Canonical complement of `small` inside `big` and the projection to it.
pub fn quotient_map(big: &Subspace, small: &Subspace) -> Result<Quotient, LinalgError> {
    if big.ambient_dim != small.ambient_dim {
        return Err(LinalgError::DimensionMismatch { expected: big.ambient_dim, found: small.ambient_dim });
    }
    if !big.contains_subspace(small) {
        return Err(LinalgError::NotContained);
    }
    let field = big.field;
    let n = big.ambient_dim;
    let small_e = small.echelon();
    let remainders: Vec<Vector> = big.basis.iter().map(|b| small_e.reduce(b.clone())).collect();
    let complement = Subspace::from_vectors(field, n, remainders);
    let mut projection = Matrix::zeros(field, complement.dim(), n);
    for (k, &rp) in complement.pivots.iter().enumerate() {
        projection[(k, rp)] = field.one();
        for (row, &sp) in small.basis.iter().zip(&small.pivots) {
            projection[(k, sp)] = -&row[rp];
        }
    }
    Ok(Quotient { reps: complement.basis, projection })
}
