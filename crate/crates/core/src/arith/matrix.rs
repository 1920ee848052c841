//! Sparse rational matrices and deterministic Gaussian elimination.
//!
//! Pivoting is always "leftmost nonzero column, rows in index order", so
//! every basis computed from an elimination is reproducible bit for bit.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rational::Rational;

/// A sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            m.data[i] = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| super::rational::int(v)).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix from sparse rows. Entries must be in bounds; rows are
    /// sorted and cleaned of zeros.
    pub fn from_rows(cols: usize, rows: Vec<SparseRow>) -> Self {
        let data = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, v)| !v.is_zero());
                r.sort_by_key(|(j, _)| *j);
                assert!(r.iter().all(|(j, _)| *j < cols), "column out of bounds");
                assert!(r.windows(2).all(|w| w[0].0 < w[1].0), "duplicate column");
                r
            })
            .collect::<Vec<_>>();
        Self {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.data[i]
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(idx) => self.data[i][idx].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(idx) => {
                if v.is_zero() {
                    row.remove(idx);
                } else {
                    row[idx].1 = v;
                }
            }
            Err(idx) => {
                if !v.is_zero() {
                    row.insert(idx, (j, v));
                }
            }
        }
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for r in &self.data {
            ech.insert(r.clone());
        }
        ech.rank()
    }
}

/// Result of [`row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub echelon: RationalMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// `a - c * b`, merging two sparse rows.
pub fn sub_scaled(a: &[(usize, Rational)], c: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize_leading(row: &mut SparseRow) {
    if let Some((_, lead)) = row.first() {
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, v) in row.iter_mut() {
                *v *= &inv;
            }
        }
    }
}

/// Incrementally built row-echelon basis of a row space.
///
/// Stored rows have leading coefficient one and pairwise distinct leading
/// columns. The basis is not reduced; [`Echelon::normal_form`] eliminates
/// every pivot column from a vector.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseRow>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    /// Adds `row` to the row space. Returns `false` when it was already in it.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        while let Some((lead, c)) = row.first().map(|(j, v)| (*j, v.clone())) {
            match self.pivot_of.get(&lead) {
                Some(&p) => row = sub_scaled(&row, &c, &self.rows[p]),
                None => {
                    normalize_leading(&mut row);
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }

    /// Unique representative of `row` modulo the row space, supported on
    /// non-pivot columns only.
    pub fn normal_form(&self, row: &[(usize, Rational)]) -> SparseRow {
        let mut row = row.to_vec();
        let mut start = 0;
        loop {
            let hit = row[start.min(row.len())..]
                .iter()
                .position(|(j, _)| self.pivot_of.contains_key(j))
                .map(|off| start + off);
            match hit {
                None => return row,
                Some(idx) => {
                    let (col, c) = (row[idx].0, row[idx].1.clone());
                    let p = &self.rows[self.pivot_of[&col]];
                    row = sub_scaled(&row, &c, p);
                    start = idx;
                }
            }
        }
    }

    /// Rows sorted by pivot column, back-substituted into reduced form.
    pub fn into_reduced(self) -> (Vec<SparseRow>, Vec<usize>) {
        let pivots: Vec<usize> = self.pivot_of.keys().copied().collect();
        let mut rows: Vec<SparseRow> = self
            .pivot_of
            .values()
            .map(|&i| self.rows[i].clone())
            .collect();
        // Clear each pivot column from every row above it, bottom-up.
        for t in (0..rows.len()).rev() {
            let col = pivots[t];
            let (upper, lower) = rows.split_at_mut(t);
            let pivot_row = &lower[0];
            for r in upper.iter_mut() {
                if let Ok(idx) = r.binary_search_by_key(&col, |(j, _)| *j) {
                    let c = r[idx].1.clone();
                    *r = sub_scaled(r, &c, pivot_row);
                }
            }
        }
        (rows, pivots)
    }
}

/// Reduced row echelon form, pivot columns and rank.
pub fn row_reduce(m: &RationalMatrix) -> RowReduction {
    let mut ech = Echelon::new();
    for r in m.rows() {
        ech.insert(r.clone());
    }
    let rank = ech.rank();
    let (rows, pivots) = ech.into_reduced();
    let mut all = rows;
    all.resize(m.nrows(), Vec::new());
    RowReduction {
        echelon: RationalMatrix {
            rows: m.nrows(),
            cols: m.ncols(),
            data: all,
        },
        pivots,
        rank,
    }
}

/// Basis of `target / column_span(m)` given as standard basis vectors of the
/// target (length `m.nrows()`), one per non-pivot position of the reduced
/// transpose.
pub fn cokernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let red = row_reduce(&m.transpose());
    let n = m.nrows();
    let mut is_pivot = vec![false; n];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&i| !is_pivot[i])
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            e
        })
        .collect()
}

/// Solves `sum_i x_i * columns[i] = rhs` for sparse vectors. Returns `None`
/// when there is no solution; the columns must be independent for the result
/// to be unique, which is reported through the second tuple component.
pub fn solve_in_span(columns: &[SparseRow], rhs: &[(usize, Rational)]) -> (Option<Vec<Rational>>, bool) {
    // Columns become rows of an augmented system, transposed: unknown i
    // lives at column i, coordinates become equations.
    let nunk = columns.len();
    let mut eqs: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (i, col) in columns.iter().enumerate() {
        for (coord, v) in col {
            eqs.entry(*coord).or_default().push((i, v.clone()));
        }
    }
    for (coord, v) in rhs {
        eqs.entry(*coord).or_default().push((nunk, v.clone()));
    }
    let mut ech = Echelon::new();
    for (_, row) in eqs {
        ech.insert(row);
    }
    let (rows, pivots) = ech.into_reduced();
    if pivots.contains(&nunk) {
        return (None, pivots.len() == nunk + 1);
    }
    let unique = pivots.len() == nunk;
    let mut x = vec![Rational::zero(); nunk];
    for (row, &p) in rows.iter().zip(&pivots) {
        // Free variables are set to zero.
        if let Some((_, v)) = row.iter().find(|(j, _)| *j == nunk) {
            x[p] = v.clone();
        }
    }
    (Some(x), unique)
}
