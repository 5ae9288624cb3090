//! 4×4 matrices over F_q acting on column vectors.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, Packed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    Singular,
    #[error("element order exceeds {0}")]
    OverCap(u64),
}

/// Row-major entries in packed field form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat4(pub [Packed; 16]);

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            writeln!(f, "{:?}", &self.0[4 * r..4 * r + 4])?;
        }
        Ok(())
    }
}

/// A vector of F_q⁴ in packed coordinates.
pub type Vec4 = [Packed; 4];

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4([1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]);

    pub fn from_elems(ctx: &FieldCtx, rows: [[FieldElem; 4]; 4]) -> Mat4 {
        let mut m = [0; 16];
        for (i, row) in rows.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                m[4 * i + j] = ctx.pack(e);
            }
        }
        Mat4(m)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Packed {
        self.0[4 * i + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat4::IDENTITY
    }

    pub fn transpose(&self) -> Mat4 {
        let mut m = [0; 16];
        for i in 0..4 {
            for j in 0..4 {
                m[4 * j + i] = self.0[4 * i + j];
            }
        }
        Mat4(m)
    }

    #[inline]
    pub fn mul(&self, rhs: &Mat4, ctx: &FieldCtx) -> Mat4 {
        let (a, b) = (&self.0, &rhs.0);
        let mut m = [0; 16];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ctx.pmul(a[4 * i], b[j]);
                for k in 1..4 {
                    acc = ctx.padd(acc, ctx.pmul(a[4 * i + k], b[4 * k + j]));
                }
                m[4 * i + j] = acc;
            }
        }
        Mat4(m)
    }

    #[inline]
    pub fn apply(&self, v: &Vec4, ctx: &FieldCtx) -> Vec4 {
        let a = &self.0;
        let mut out = [0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = ctx.pmul(a[4 * i], v[0]);
            for k in 1..4 {
                acc = ctx.padd(acc, ctx.pmul(a[4 * i + k], v[k]));
            }
            *o = acc;
        }
        out
    }

    pub fn pow(&self, mut e: u64, ctx: &FieldCtx) -> Mat4 {
        let mut base = *self;
        let mut acc = Mat4::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        acc
    }

    /// Gauss–Jordan inverse.
    pub fn inv(&self, ctx: &FieldCtx) -> Result<Mat4, MatrixError> {
        let mut a = self.0;
        let mut b = Mat4::IDENTITY.0;
        for col in 0..4 {
            let pivot = (col..4).find(|&r| a[4 * r + col] != 0).ok_or(MatrixError::Singular)?;
            if pivot != col {
                for j in 0..4 {
                    a.swap(4 * pivot + j, 4 * col + j);
                    b.swap(4 * pivot + j, 4 * col + j);
                }
            }
            let inv = ctx.pinv(a[4 * col + col]).map_err(|_| MatrixError::Singular)?;
            for j in 0..4 {
                a[4 * col + j] = ctx.pmul(a[4 * col + j], inv);
                b[4 * col + j] = ctx.pmul(b[4 * col + j], inv);
            }
            for r in 0..4 {
                let f = a[4 * r + col];
                if r == col || f == 0 {
                    continue;
                }
                let nf = ctx.pneg(f);
                for j in 0..4 {
                    a[4 * r + j] = ctx.padd(a[4 * r + j], ctx.pmul(nf, a[4 * col + j]));
                    b[4 * r + j] = ctx.padd(b[4 * r + j], ctx.pmul(nf, b[4 * col + j]));
                }
            }
        }
        Ok(Mat4(b))
    }

    /// Determinant by elimination.
    pub fn det(&self, ctx: &FieldCtx) -> FieldElem {
        let mut a = self.0;
        let mut det = ctx.one();
        for col in 0..4 {
            let Some(pivot) = (col..4).find(|&r| a[4 * r + col] != 0) else {
                return ctx.zero();
            };
            if pivot != col {
                for j in 0..4 {
                    a.swap(4 * pivot + j, 4 * col + j);
                }
                det = ctx.neg(det);
            }
            let p = ctx.unpack(a[4 * col + col]);
            det = ctx.mul(det, p);
            let inv = ctx.pinv(a[4 * col + col]).expect("nonzero pivot");
            for r in col + 1..4 {
                let f = ctx.pmul(a[4 * r + col], inv);
                if f == 0 {
                    continue;
                }
                let nf = ctx.pneg(f);
                for j in col..4 {
                    a[4 * r + j] = ctx.padd(a[4 * r + j], ctx.pmul(nf, a[4 * col + j]));
                }
            }
        }
        det
    }

    /// Basis of the null space of `self`, as packed vectors.
    pub fn kernel(&self, ctx: &FieldCtx) -> Vec<Vec4> {
        let mut a = self.0;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..4 {
            let Some(p) = (row..4).find(|&r| a[4 * r + col] != 0) else { continue };
            for j in 0..4 {
                a.swap(4 * p + j, 4 * row + j);
            }
            let inv = ctx.pinv(a[4 * row + col]).expect("nonzero pivot");
            for j in 0..4 {
                a[4 * row + j] = ctx.pmul(a[4 * row + j], inv);
            }
            for r in 0..4 {
                let f = a[4 * r + col];
                if r != row && f != 0 {
                    let nf = ctx.pneg(f);
                    for j in 0..4 {
                        a[4 * r + j] = ctx.padd(a[4 * r + j], ctx.pmul(nf, a[4 * row + j]));
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (0..4)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = [0; 4];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = ctx.pneg(a[4 * r + free]);
                }
                v
            })
            .collect()
    }

    pub fn add(&self, rhs: &Mat4, ctx: &FieldCtx) -> Mat4 {
        let mut m = [0; 16];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = ctx.padd(self.0[i], rhs.0[i]);
        }
        Mat4(m)
    }

    /// Conjugate `b·self·b⁻¹`.
    pub fn conjugate_by(&self, b: &Mat4, ctx: &FieldCtx) -> Result<Mat4, MatrixError> {
        Ok(b.mul(self, ctx).mul(&b.inv(ctx)?, ctx))
    }
}

/// Smallest n ≥ 1 with mⁿ = I.
pub fn element_order(m: &Mat4, cap: u64, ctx: &FieldCtx) -> Result<u64, MatrixError> {
    let mut acc = *m;
    for n in 1..=cap {
        if acc.is_identity() {
            return Ok(n);
        }
        acc = acc.mul(m, ctx);
    }
    Err(MatrixError::OverCap(cap))
}

/// Product of a word of matrices, left to right.
pub fn product<'a>(ms: impl IntoIterator<Item = &'a Mat4>, ctx: &FieldCtx) -> Mat4 {
    ms.into_iter().fold(Mat4::IDENTITY, |acc, m| acc.mul(m, ctx))
}
