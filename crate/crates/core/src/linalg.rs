//! Sparse exact linear algebra over `Q(i)`: incremental echelon form, rank,
//! membership, nullspaces and particular solutions.
//!
//! Vectors are sorted `(column, value)` lists without stored zeros. Rows of an
//! [`Echelon`] are normalized to a leading 1 and every other entry of a row
//! sits to the right of its pivot, so reduction only ever moves rightward.

use std::collections::BTreeMap;

use crate::arith::GaussianRational;

pub type SparseVec = Vec<(usize, GaussianRational)>;

/// `x + a·y` for sorted sparse vectors.
pub fn axpy(x: &[(usize, GaussianRational)], a: &GaussianRational, y: &[(usize, GaussianRational)]) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        match (x.get(i), y.get(j)) {
            (Some((ci, vi)), Some((cj, vj))) if ci == cj => {
                let v = vi + &(a * vj);
                if !v.is_zero() {
                    out.push((*ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ci, vi)), Some((cj, _))) if ci < cj => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (Some((ci, vi)), None) => {
                out.push((*ci, vi.clone()));
                i += 1;
            }
            (_, Some((cj, vj))) => {
                out.push((*cj, a * vj));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Builds a sorted sparse vector from unsorted entries, merging duplicates.
pub fn sparse_from_entries(entries: impl IntoIterator<Item = (usize, GaussianRational)>) -> SparseVec {
    let mut acc: BTreeMap<usize, GaussianRational> = BTreeMap::new();
    for (c, v) in entries {
        *acc.entry(c).or_default() += &v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn dense_to_sparse(v: &[GaussianRational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect()
}

pub fn scale(v: &[(usize, GaussianRational)], a: &GaussianRational) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(c, x)| (*c, x * a)).collect()
}

fn lookup(v: &[(usize, GaussianRational)], col: usize) -> Option<&GaussianRational> {
    v.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &v[i].1)
}

/// Row echelon basis of a subspace of `Q(i)^ncols`, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut e = Self::new();
        for r in rows {
            e.insert(r.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut pos = 0;
        while pos < v.len() {
            let col = v[pos].0;
            if let Some(&r) = self.pivots.get(&col) {
                let a = -&v[pos].1;
                v = axpy(&v, &a, &self.rows[r]);
            } else {
                pos += 1;
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span. Returns `true` if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((lead, a)) = r.first().cloned() else {
            return false;
        };
        let inv = a.inv().expect("leading entry is nonzero");
        let row = scale(&r, &inv);
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Pivot column of the row whose leading entry is at `col`, if any.
    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Fully reduced rows keyed by pivot column: each row vanishes on every
    /// other pivot column.
    pub fn rref(&self) -> BTreeMap<usize, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        // Process pivots right to left so that each row only needs rows
        // already in reduced form.
        for (&col, &r) in self.pivots.iter().rev() {
            let mut v = self.rows[r].clone();
            let mut pos = 1;
            while pos < v.len() {
                let c = v[pos].0;
                if let Some(red) = out.get(&c) {
                    let a = -&v[pos].1;
                    v = axpy(&v, &a, red);
                } else {
                    pos += 1;
                }
            }
            out.insert(col, v);
        }
        out
    }
}

/// Basis of `{x : row·x = 0 for every row}` in `Q(i)^ncols`.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    nullspace_with_free_columns(rows, ncols)
        .into_iter()
        .map(|(_, v)| v)
        .collect()
}

/// Nullspace basis paired with the free column of each vector. Vector `k`
/// has a 1 at its free column and is the only basis vector nonzero there.
pub fn nullspace_with_free_columns(rows: &[SparseVec], ncols: usize) -> Vec<(usize, SparseVec)> {
    let ech = Echelon::from_rows(rows);
    let rref = ech.rref();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !rref.contains_key(c)) {
        let mut entries = vec![(free, GaussianRational::one())];
        for (&pc, row) in &rref {
            if let Some(v) = lookup(row, free) {
                entries.push((pc, -v));
            }
        }
        entries.sort_by_key(|(c, _)| *c);
        basis.push((free, entries));
    }
    basis
}

/// Particular solution of `A x = b` with every free variable set to zero, or
/// `None` if the system is inconsistent. `rows[k]` is row `k` of `A`.
pub fn solve(rows: &[SparseVec], rhs: &[GaussianRational], ncols: usize) -> Option<Vec<GaussianRational>> {
    let mut sys = LinearSystem::new(ncols);
    for (r, b) in rows.iter().zip(rhs) {
        sys.push(r.clone(), b.clone());
    }
    sys.solution()
}

/// Augmented system `A x = b` accumulated row by row.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    ncols: usize,
    ech: Echelon,
    rows_seen: usize,
}

impl LinearSystem {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            ech: Echelon::new(),
            rows_seen: 0,
        }
    }

    pub fn push(&mut self, mut row: SparseVec, rhs: GaussianRational) {
        if !rhs.is_zero() {
            row.push((self.ncols, rhs));
        }
        self.rows_seen += 1;
        self.ech.insert(row);
    }

    pub fn is_consistent(&self) -> bool {
        !self.ech.has_pivot(self.ncols)
    }

    pub fn rank(&self) -> usize {
        self.ech.rank() - usize::from(!self.is_consistent())
    }

    pub fn rows_seen(&self) -> usize {
        self.rows_seen
    }

    pub fn solution(&self) -> Option<Vec<GaussianRational>> {
        if !self.is_consistent() {
            return None;
        }
        let mut x = vec![GaussianRational::zero(); self.ncols];
        for (pc, row) in self.ech.rref() {
            if let Some(v) = lookup(&row, self.ncols) {
                x[pc] = v.clone();
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn row(v: &[i64]) -> SparseVec {
        dense_to_sparse(&v.iter().map(|&x| q(x, 1)).collect::<Vec<_>>())
    }

    fn dot(a: &SparseVec, b: &SparseVec) -> GaussianRational {
        a.iter()
            .filter_map(|(c, x)| lookup(b, *c).map(|y| x * y))
            .sum()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[1, 2, 3])));
        assert!(e.insert(row(&[2, 4, 7])));
        assert!(!e.insert(row(&[3, 6, 10])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&row(&[0, 0, 1])));
        assert!(!e.contains(&row(&[0, 1, 0])));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![row(&[1, 2, 3, 4]), row(&[2, 4, 6, 9])];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(dot(r, v).is_zero());
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let rows = vec![row(&[1, 1]), row(&[1, -1])];
        let x = solve(&rows, &[q(3, 1), q(1, 1)], 2).unwrap();
        assert_eq!(x, vec![q(2, 1), q(1, 1)]);
        let rows = vec![row(&[1, 1]), row(&[2, 2])];
        assert!(solve(&rows, &[q(1, 1), q(3, 1)], 2).is_none());
    }

    #[test]
    fn complex_pivots() {
        let i = GaussianRational::i();
        let rows = vec![vec![(0, i.clone()), (1, q(1, 1))]];
        let ns = nullspace(&rows, 2);
        assert_eq!(ns.len(), 1);
        assert!(dot(&rows[0], &ns[0]).is_zero());
    }
}
