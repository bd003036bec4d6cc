use serde::{Deserialize, Serialize};

use super::{Domain, LATTICE_BITS};
use crate::error::MeshError;
use crate::scalar::{Point2, Real};

/// Straight, axis-aligned geometric crack running from `mouth` to `tip`.
///
/// Nodes on the slit are duplicated so the two faces are disconnected, except
/// the tip node which both faces share. The mouth node (usually on the outer
/// boundary) is duplicated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slit<T> {
    pub mouth: Point2<T>,
    pub tip: Point2<T>,
}

impl<T: Real> Slit<T> {
    pub fn new(mouth: Point2<T>, tip: Point2<T>) -> Self {
        Self { mouth, tip }
    }
}

/// Slit resolved onto the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct LatticeSlit {
    /// 0 when the slit is horizontal (runs along x), 1 when vertical.
    pub axis: usize,
    /// Lattice coordinate of the slit line on the other axis.
    pub line: i64,
    pub mouth: i64,
    pub tip: i64,
}

impl LatticeSlit {
    pub fn resolve<T: Real>(
        slit: &Slit<T>,
        domain: &Domain<T>,
        depth: u32,
    ) -> Result<Self, MeshError> {
        let tol = domain.root_size * T::lit(1e-9);
        let (m, em) = domain.point_to_lattice(slit.mouth);
        let (t, et) = domain.point_to_lattice(slit.tip);
        if em > tol || et > tol {
            return Err(MeshError::InvalidSlit(
                "endpoints are not representable on the mesh lattice".into(),
            ));
        }
        let axis = if m[1] == t[1] && m[0] != t[0] {
            0
        } else if m[0] == t[0] && m[1] != t[1] {
            1
        } else {
            return Err(MeshError::InvalidSlit(
                "slit must be a non-degenerate horizontal or vertical segment".into(),
            ));
        };
        let cell = 1i64 << (LATTICE_BITS - depth);
        for (name, v) in [("mouth", m), ("tip", t)] {
            if v[0] % cell != 0 || v[1] % cell != 0 {
                return Err(MeshError::InvalidSlit(format!(
                    "{name} is not on a cell-edge line at depth {depth}"
                )));
            }
        }
        let other = 1 - axis;
        Ok(Self {
            axis,
            line: m[other],
            mouth: m[axis],
            tip: t[axis],
        })
    }

    /// True when the lattice point is a duplicated slit point (tip excluded).
    pub fn holds(&self, p: [i64; 2]) -> bool {
        let other = 1 - self.axis;
        if p[other] != self.line {
            return false;
        }
        let s = p[self.axis];
        if self.mouth < self.tip {
            self.mouth <= s && s < self.tip
        } else {
            self.tip < s && s <= self.mouth
        }
    }

    /// True when a cell with lattice span `lo..hi` sits on the positive side
    /// (above a horizontal slit, right of a vertical one).
    pub fn positive_side(&self, lo: [i64; 2]) -> bool {
        lo[1 - self.axis] >= self.line
    }

    /// True when a cell of this span would straddle the slit segment.
    pub fn cuts(&self, lo: [i64; 2], hi: [i64; 2]) -> bool {
        let other = 1 - self.axis;
        let (a, b) = if self.mouth < self.tip {
            (self.mouth, self.tip)
        } else {
            (self.tip, self.mouth)
        };
        lo[other] < self.line && self.line < hi[other] && lo[self.axis] < b && a < hi[self.axis]
    }
}
