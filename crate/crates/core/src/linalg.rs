//! Dense Gaussian elimination over `F_q`.

use crate::gf::{FieldCtx, GfElem};

/// Incrementally maintained reduced row echelon form.
pub struct RowReducer<'a> {
    ctx: &'a FieldCtx,
    ncols: usize,
    rows: Vec<Vec<GfElem>>,
    pivots: Vec<usize>,
}

impl<'a> RowReducer<'a> {
    pub fn new(ctx: &'a FieldCtx, ncols: usize) -> RowReducer<'a> {
        RowReducer { ctx, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<GfElem>) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        let ctx = self.ctx;
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = row[pc];
            if !f.is_zero() {
                axpy(ctx, &mut row, r, ctx.neg(f));
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(row[pc]).expect("nonzero pivot");
        for x in row.iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for r in self.rows.iter_mut() {
            let f = r[pc];
            if !f.is_zero() {
                axpy(ctx, r, &row, ctx.neg(f));
            }
        }
        self.rows.push(row);
        self.pivots.push(pc);
        true
    }

    /// Basis of `{v : row . v = 0 for every inserted row}`, one vector per
    /// free column, in increasing column order.
    pub fn nullspace(&self) -> Vec<Vec<GfElem>> {
        let ctx = self.ctx;
        let mut is_pivot = vec![false; self.ncols];
        for &pc in &self.pivots {
            is_pivot[pc] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![GfElem::ZERO; self.ncols];
                v[free] = GfElem::ONE;
                for (r, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = ctx.neg(r[free]);
                }
                v
            })
            .collect()
    }
}

fn axpy(ctx: &FieldCtx, y: &mut [GfElem], x: &[GfElem], a: GfElem) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = ctx.add(*yi, ctx.mul(a, *xi));
        }
    }
}

pub fn dot(ctx: &FieldCtx, a: &[GfElem], b: &[GfElem]) -> GfElem {
    a.iter().zip(b).fold(GfElem::ZERO, |acc, (x, y)| ctx.add(acc, ctx.mul(*x, *y)))
}

/// Nullspace of the matrix with the given rows.
pub fn nullspace(ctx: &FieldCtx, rows: &[Vec<GfElem>], ncols: usize) -> Vec<Vec<GfElem>> {
    let mut red = RowReducer::new(ctx, ncols);
    for r in rows {
        red.insert(r.clone());
    }
    red.nullspace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(ctx: &FieldCtx, v: &[i64]) -> Vec<GfElem> {
        v.iter().map(|&x| ctx.from_int(x)).collect()
    }

    #[test]
    fn small_nullspace() {
        let f = FieldCtx::new(7, 1).unwrap();
        let rows = vec![row(&f, &[1, 2, 3]), row(&f, &[2, 4, 6])];
        let ns = nullspace(&f, &rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(dot(&f, r, v).is_zero());
            }
        }
        assert!(nullspace(&f, &[row(&f, &[1, 0]), row(&f, &[0, 1])], 2).is_empty());
    }

    #[test]
    fn rank_and_nullity_add_up_on_pseudorandom_matrices() {
        let f = FieldCtx::new(3, 2).unwrap();
        let mut state = 0x2545F4914F6CDD1Du64;
        for trial in 0..30 {
            let (m, n) = (1 + trial % 6, 1 + (trial * 7) % 8);
            let rows: Vec<Vec<GfElem>> = (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            state ^= state << 13;
                            state ^= state >> 7;
                            state ^= state << 17;
                            // bias toward zero to get rank deficiency
                            let c = (state % 13) as u32;
                            f.from_code(if c < 9 { c } else { 0 }).unwrap()
                        })
                        .collect()
                })
                .collect();
            let mut red = RowReducer::new(&f, n);
            for r in &rows {
                red.insert(r.clone());
            }
            let ns = red.nullspace();
            assert_eq!(red.rank() + ns.len(), n);
            for v in &ns {
                for r in &rows {
                    assert!(dot(&f, r, v).is_zero());
                }
            }
        }
    }
}
