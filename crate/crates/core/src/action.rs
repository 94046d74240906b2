//! `GL_2(F_q)` acting on the coefficients of binary quadratic forms.
//!
//! Basis conventions: `Y = (1, 0)^T`, `X = (0, 1)^T`. A group element acts on
//! `V = span(Y^2, 2XY, X^2)` and, on the right, on the coordinate functions
//! `(a2, a1, a0)`. The 3x3 induced matrix has one row per variable in the order
//! `a2, a1, a0`; row `i` holds the coordinates of the image of that variable.
//! Composition is a right action: `apply(g * h, f) = apply(h, apply(g, f))`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, GfElem};
use crate::poly::{Poly, Var};

/// Largest `q` for which all of `SL_2(F_q)` may be enumerated.
pub const MAX_SL2_ENUMERATION_Q: u32 = 9;

pub type Mat2 = [[GfElem; 2]; 2];
pub type Mat3 = [[GfElem; 3]; 3];

#[derive(Clone)]
pub struct GroupElem {
    ctx: Arc<FieldCtx>,
    m: Mat2,
    induced: Mat3,
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |x: GfElem| self.ctx.format(x);
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            c(self.m[0][0]),
            c(self.m[0][1]),
            c(self.m[1][0]),
            c(self.m[1][1])
        )
    }
}

impl PartialEq for GroupElem {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.m == other.m
    }
}

impl Eq for GroupElem {}

/// A linear form `y*Y + x*X` in the plane.
#[derive(Clone, Copy)]
struct PlaneVec {
    y: GfElem,
    x: GfElem,
}

/// A binary quadratic `c_yy Y^2 + c_xy XY + c_xx X^2`.
struct Quadratic {
    yy: GfElem,
    xy: GfElem,
    xx: GfElem,
}

fn product(ctx: &FieldCtx, u: PlaneVec, v: PlaneVec) -> Quadratic {
    Quadratic {
        yy: ctx.mul(u.y, v.y),
        xy: ctx.add(ctx.mul(u.y, v.x), ctx.mul(u.x, v.y)),
        xx: ctx.mul(u.x, v.x),
    }
}

pub fn det2(ctx: &FieldCtx, m: &Mat2) -> GfElem {
    ctx.sub(ctx.mul(m[0][0], m[1][1]), ctx.mul(m[0][1], m[1][0]))
}

pub fn det3(ctx: &FieldCtx, m: &Mat3) -> GfElem {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        ctx.sub(ctx.mul(m[r1][c1], m[r2][c2]), ctx.mul(m[r1][c2], m[r2][c1]))
    };
    let t0 = ctx.mul(m[0][0], minor(1, 2, 1, 2));
    let t1 = ctx.mul(m[0][1], minor(1, 2, 0, 2));
    let t2 = ctx.mul(m[0][2], minor(1, 2, 0, 1));
    ctx.add(ctx.sub(t0, t1), t2)
}

fn mat2_mul(ctx: &FieldCtx, a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[GfElem::ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = ctx.add(ctx.mul(a[i][0], b[0][j]), ctx.mul(a[i][1], b[1][j]));
        }
    }
    out
}

pub fn mat3_mul(ctx: &FieldCtx, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[GfElem::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).fold(GfElem::ZERO, |acc, k| ctx.add(acc, ctx.mul(a[i][k], b[k][j])));
        }
    }
    out
}

/// Induced action on `(a2, a1, a0)`, obtained by substituting `X -> gX`,
/// `Y -> gY` into `a0 X^2 + 2 a1 XY + a2 Y^2` and reading off the new
/// coefficients on `Y^2, 2XY, X^2`.
pub fn derive_induced(ctx: &FieldCtx, m: &Mat2) -> Result<Mat3> {
    if det2(ctx, m).is_zero() {
        return Err(Error::SingularMatrix);
    }
    // images of the basis vectors are the columns of m
    let gy = PlaneVec { y: m[0][0], x: m[1][0] };
    let gx = PlaneVec { y: m[0][1], x: m[1][1] };
    let two = ctx.from_int(2);
    let half = ctx.inv(two)?;
    // The form is sum over variables v of (coefficient of v) * (monomial of v);
    // transformed monomials, indexed by variable in (a2, a1, a0) order.
    let mut xy = product(ctx, gx, gy);
    xy.yy = ctx.mul(xy.yy, two);
    xy.xy = ctx.mul(xy.xy, two);
    xy.xx = ctx.mul(xy.xx, two);
    let transformed = [product(ctx, gy, gy), xy, product(ctx, gx, gx)];
    let mut induced = [[GfElem::ZERO; 3]; 3];
    for (var, quad) in transformed.iter().enumerate() {
        // new a2 = coefficient on Y^2, new a1 = coefficient on XY / 2, new a0 = on X^2
        induced[0][var] = quad.yy;
        induced[1][var] = ctx.mul(quad.xy, half);
        induced[2][var] = quad.xx;
    }
    Ok(induced)
}

impl GroupElem {
    pub fn new(ctx: &Arc<FieldCtx>, m: Mat2) -> Result<GroupElem> {
        let induced = derive_induced(ctx, &m)?;
        Ok(GroupElem { ctx: ctx.clone(), m, induced })
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> GroupElem {
        GroupElem::new(ctx, [[GfElem::ONE, GfElem::ZERO], [GfElem::ZERO, GfElem::ONE]]).expect("identity is invertible")
    }

    /// `sigma_c = [[1, c], [0, 1]]`.
    pub fn sigma(ctx: &Arc<FieldCtx>, c: GfElem) -> GroupElem {
        GroupElem::new(ctx, [[GfElem::ONE, c], [GfElem::ZERO, GfElem::ONE]]).expect("unipotent")
    }

    /// `rho_w = [[w, 0], [0, 1]]`, `w != 0`.
    pub fn rho(ctx: &Arc<FieldCtx>, w: GfElem) -> Result<GroupElem> {
        GroupElem::new(ctx, [[w, GfElem::ZERO], [GfElem::ZERO, GfElem::ONE]])
    }

    /// `tau = [[0, 1], [-1, 0]]`.
    pub fn tau(ctx: &Arc<FieldCtx>) -> GroupElem {
        let minus_one = ctx.neg(GfElem::ONE);
        GroupElem::new(ctx, [[GfElem::ZERO, GfElem::ONE], [minus_one, GfElem::ZERO]]).expect("det 1")
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn induced(&self) -> &Mat3 {
        &self.induced
    }

    pub fn det(&self) -> GfElem {
        det2(&self.ctx, &self.m)
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &GroupElem) -> GroupElem {
        let m = mat2_mul(&self.ctx, &self.m, &other.m);
        GroupElem { ctx: self.ctx.clone(), m, induced: mat3_mul(&self.ctx, &self.induced, &other.induced) }
    }

    pub fn inverse(&self) -> GroupElem {
        let ctx = &self.ctx;
        let d = ctx.inv(self.det()).expect("group elements are invertible");
        let [[a, b], [c, e]] = self.m;
        let m = [[ctx.mul(e, d), ctx.neg(ctx.mul(b, d))], [ctx.neg(ctx.mul(c, d)), ctx.mul(a, d)]];
        GroupElem::new(ctx, m).expect("inverse is invertible")
    }

    /// Image of a variable as a linear form.
    pub fn image_of(&self, v: Var) -> Poly {
        let row = match v {
            Var::A2 => 0,
            Var::A1 => 1,
            Var::A0 => 2,
        };
        let r = self.induced[row];
        Poly::linear(&self.ctx, [r[2], r[1], r[0]])
    }

    /// `(f) g`: substitutes each variable by its image.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        let images = [self.image_of(Var::A0), self.image_of(Var::A1), self.image_of(Var::A2)];
        f.substitute_all([&images[0], &images[1], &images[2]])
    }
}

/// The Sylow `p`-subgroup `{sigma_c}`, one element per `c` in enumeration order.
pub fn enumerate_p(ctx: &Arc<FieldCtx>) -> Vec<GroupElem> {
    ctx.enumerate().into_iter().map(|c| GroupElem::sigma(ctx, c)).collect()
}

/// All of `SL_2(F_q)`; only for `q <= 9`.
pub fn enumerate_sl2(ctx: &Arc<FieldCtx>) -> Result<Vec<GroupElem>> {
    if ctx.q() > MAX_SL2_ENUMERATION_Q {
        return Err(Error::EnumerationBound { q: ctx.q(), max: MAX_SL2_ENUMERATION_Q });
    }
    let els = ctx.enumerate();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    let m = [[a, b], [c, d]];
                    if det2(ctx, &m) == GfElem::ONE {
                        out.push(GroupElem::new(ctx, m)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `P` together with `tau`.
pub fn generators_sl2(ctx: &Arc<FieldCtx>) -> Vec<GroupElem> {
    let mut gens = enumerate_p(ctx);
    gens.push(GroupElem::tau(ctx));
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: i64, n: i64) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, n).unwrap())
    }

    #[test]
    fn induced_matrices_reproduce_the_displays() {
        let ctx = field(7, 1);
        for c in ctx.enumerate() {
            let s = GroupElem::sigma(&ctx, c);
            let two_c = ctx.mul(ctx.from_int(2), c);
            let c2 = ctx.mul(c, c);
            let expected = [
                [GfElem::ONE, two_c, c2],
                [GfElem::ZERO, GfElem::ONE, c],
                [GfElem::ZERO, GfElem::ZERO, GfElem::ONE],
            ];
            assert_eq!(*s.induced(), expected);
        }
        let w = ctx.omega();
        let r = GroupElem::rho(&ctx, w).unwrap();
        let z = GfElem::ZERO;
        assert_eq!(*r.induced(), [[ctx.mul(w, w), z, z], [z, w, z], [z, z, GfElem::ONE]]);
        let t = GroupElem::tau(&ctx);
        let m1 = ctx.neg(GfElem::ONE);
        assert_eq!(*t.induced(), [[z, z, GfElem::ONE], [z, m1, z], [GfElem::ONE, z, z]]);
    }

    #[test]
    fn singular_matrix_rejected() {
        let ctx = field(5, 1);
        let z = GfElem::ZERO;
        assert!(matches!(GroupElem::new(&ctx, [[GfElem::ONE, z], [z, z]]), Err(Error::SingularMatrix)));
        assert!(GroupElem::rho(&ctx, z).is_err());
    }

    #[test]
    fn apply_examples() {
        let ctx = field(7, 1);
        let a0 = Poly::var(&ctx, Var::A0);
        let a1 = Poly::var(&ctx, Var::A1);
        let a2 = Poly::var(&ctx, Var::A2);
        for c in ctx.enumerate() {
            let s = GroupElem::sigma(&ctx, c);
            assert_eq!(s.apply(&a1).unwrap(), &a1 + &a0.scale(c));
        }
        let t = GroupElem::tau(&ctx);
        for c in ctx.enumerate() {
            for k in ctx.enumerate() {
                let two_c = ctx.mul(ctx.from_int(2), c);
                let c2k = ctx.sub(ctx.mul(c, c), k);
                let factor = &(&a2 + &a1.scale(two_c)) + &a0.scale(c2k);
                let expected = &(&a0 - &a1.scale(two_c)) + &a2.scale(c2k);
                assert_eq!(t.apply(&factor).unwrap(), expected);
            }
        }
        let f = &(&a2 * &a1.pow(3)) + &a0;
        assert_eq!(GroupElem::identity(&ctx).apply(&f).unwrap(), f);
    }

    #[test]
    fn group_law_examples() {
        let ctx = field(5, 1);
        for c in ctx.enumerate() {
            for d in ctx.enumerate() {
                let lhs = GroupElem::sigma(&ctx, c).compose(&GroupElem::sigma(&ctx, d));
                assert_eq!(lhs, GroupElem::sigma(&ctx, ctx.add(c, d)));
            }
        }
        for w in ctx.units() {
            let r = GroupElem::rho(&ctx, w).unwrap();
            for c in ctx.enumerate() {
                let conj = r.inverse().compose(&GroupElem::sigma(&ctx, c)).compose(&r);
                let m = conj.matrix();
                assert_eq!((m[0][0], m[1][0], m[1][1]), (GfElem::ONE, GfElem::ZERO, GfElem::ONE));
            }
        }
        let t = GroupElem::tau(&ctx);
        let t2 = t.compose(&t);
        let m1 = ctx.neg(GfElem::ONE);
        assert_eq!(*t2.matrix(), [[m1, GfElem::ZERO], [GfElem::ZERO, m1]]);
        assert_eq!(*t2.induced(), *GroupElem::identity(&ctx).induced());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_p(&field(3, 1)).len(), 3);
        assert_eq!(enumerate_sl2(&field(3, 1)).unwrap().len(), 24);
        assert_eq!(enumerate_sl2(&field(5, 1)).unwrap().len(), 120);
        assert_eq!(enumerate_sl2(&field(3, 2)).unwrap().len(), 720);
        assert_eq!(generators_sl2(&field(7, 1)).len(), 8);
        assert!(matches!(enumerate_sl2(&field(11, 1)), Err(Error::EnumerationBound { q: 11, max: 9 })));
        let all = enumerate_sl2(&field(5, 1)).unwrap();
        for (i, g) in all.iter().enumerate() {
            assert!(all[i + 1..].iter().all(|h| h != g));
        }
    }

    #[test]
    fn induced_determinant_is_cube() {
        let ctx = field(5, 1);
        let els = ctx.enumerate();
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    for &d in &els {
                        let m = [[a, b], [c, d]];
                        let det = det2(&ctx, &m);
                        if det.is_zero() {
                            continue;
                        }
                        let g = GroupElem::new(&ctx, m).unwrap();
                        assert_eq!(det3(&ctx, g.induced()), ctx.pow(det, 3));
                    }
                }
            }
        }
    }

    #[test]
    fn right_action_functoriality() {
        let ctx = field(5, 1);
        let all = enumerate_sl2(&ctx).unwrap();
        let f = Poly::parse(&ctx, "a0^2*a1 + 3*a1*a2^2 + a2 + 4*a0*a1*a2").unwrap();
        // deterministic spread of pairs
        for i in 0..40 {
            let g = &all[(i * 37) % all.len()];
            let h = &all[(i * 53 + 11) % all.len()];
            let gh = g.compose(h);
            let rederived = derive_induced(&ctx, gh.matrix()).unwrap();
            assert_eq!(*gh.induced(), rederived);
            assert_eq!(gh.apply(&f).unwrap(), h.apply(&g.apply(&f).unwrap()).unwrap());
        }
    }
}
