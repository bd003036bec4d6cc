//! Quadtree meshes with hanging nodes.
//!
//! Cells live on an integer lattice: a cell at level `l` with index `(i, j)`
//! covers lattice coordinates `[i, i + 1) * 2^(LATTICE_BITS - l)` in each
//! direction, so node identity is decided exactly by integer keys instead of
//! a floating point merge tolerance. Root cells are squares of equal size;
//! non-square domains (strips, the L-panel) are tiled by several roots.
//!
//! Leaves are the elements. A leaf whose neighbour across an edge is finer
//! carries that neighbour's corner on its edge as an extra (hanging) vertex,
//! which turns it into a convex polygon with up to eight vertices.

mod dump;
mod mesh;
mod slit;

pub use dump::{parse_tree_dump, write_tree_dump, write_vtk_mesh, VtkData};
pub use mesh::{EdgeNeighbor, NodeOrigin, PolygonElement, QuadtreeMesh, RefineReport};
pub use slit::Slit;

use serde::{Deserialize, Serialize};

use crate::scalar::{Point2, Real};

/// Deepest level representable on the lattice.
pub const LATTICE_BITS: u32 = 30;

/// Default cap on refinement depth.
pub const DEFAULT_MAX_DEPTH: u32 = 8;

pub type CellId = usize;
pub type NodeId = usize;

/// Child ordering inside a split cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    SouthWest = 0,
    SouthEast = 1,
    NorthWest = 2,
    NorthEast = 3,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant::SouthWest,
        Quadrant::SouthEast,
        Quadrant::NorthWest,
        Quadrant::NorthEast,
    ];

    fn offset(self) -> [i64; 2] {
        match self {
            Quadrant::SouthWest => [0, 0],
            Quadrant::SouthEast => [1, 0],
            Quadrant::NorthWest => [0, 1],
            Quadrant::NorthEast => [1, 1],
        }
    }
}

/// Edge direction of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    South,
    East,
    North,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::South, Side::East, Side::North, Side::West];

    fn step(self) -> [i64; 2] {
        match self {
            Side::South => [0, -1],
            Side::East => [1, 0],
            Side::North => [0, 1],
            Side::West => [-1, 0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadCell<T> {
    pub id: CellId,
    pub level: u32,
    /// Index of the cell among cells of its level, relative to the domain origin.
    pub index: [i64; 2],
    /// Lower-left corner in mm.
    pub origin: Point2<T>,
    /// Edge length in mm.
    pub size: T,
    pub parent: Option<CellId>,
    /// Children in SW, SE, NW, NE order.
    pub children: Option<[CellId; 4]>,
}

impl<T: Real> QuadCell<T> {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn center(&self) -> Point2<T> {
        let h = self.size * T::half();
        [self.origin[0] + h, self.origin[1] + h]
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p[0] >= self.origin[0]
            && p[0] <= self.origin[0] + self.size
            && p[1] >= self.origin[1]
            && p[1] <= self.origin[1] + self.size
    }

    /// Lattice span `[lo, hi)` along each axis.
    pub fn lattice_span(&self) -> ([i64; 2], [i64; 2]) {
        let w = 1i64 << (LATTICE_BITS - self.level);
        let lo = [self.index[0] * w, self.index[1] * w];
        (lo, [lo[0] + w, lo[1] + w])
    }
}

/// Union of equal-size square root cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain<T> {
    pub origin: Point2<T>,
    pub root_size: T,
    /// Integer placement of each root in units of `root_size`.
    pub roots: Vec<[i64; 2]>,
}

impl<T: Real> Domain<T> {
    pub fn square(origin: Point2<T>, size: T) -> Self {
        Self {
            origin,
            root_size: size,
            roots: vec![[0, 0]],
        }
    }

    /// `nx` by `ny` block of roots.
    pub fn rectangle(origin: Point2<T>, root_size: T, nx: usize, ny: usize) -> Self {
        let mut roots = Vec::with_capacity(nx * ny);
        for j in 0..ny as i64 {
            for i in 0..nx as i64 {
                roots.push([i, j]);
            }
        }
        Self {
            origin,
            root_size,
            roots,
        }
    }

    /// L-shaped panel of three `arm`-sized squares with the upper-right corner
    /// cut out; the re-entrant corner sits at `origin + (arm, arm)`.
    pub fn l_shape(origin: Point2<T>, arm: T) -> Self {
        Self {
            origin,
            root_size: arm,
            roots: vec![[0, 0], [0, 1], [1, 1]],
        }
    }

    pub fn area(&self) -> T {
        self.root_size * self.root_size * T::from_usize_lossy(self.roots.len())
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounds(&self) -> (Point2<T>, Point2<T>) {
        let mut lo = [i64::MAX; 2];
        let mut hi = [i64::MIN; 2];
        for r in &self.roots {
            for a in 0..2 {
                lo[a] = lo[a].min(r[a]);
                hi[a] = hi[a].max(r[a] + 1);
            }
        }
        let f = |k: i64, a: usize| self.origin[a] + self.root_size * T::from_i64(k).unwrap();
        ([f(lo[0], 0), f(lo[1], 1)], [f(hi[0], 0), f(hi[1], 1)])
    }

    pub(crate) fn lattice_to_point(&self, x: i64, y: i64) -> Point2<T> {
        let unit = self.root_size / T::from_i64(1i64 << LATTICE_BITS).unwrap();
        [
            self.origin[0] + unit * T::from_i64(x).unwrap(),
            self.origin[1] + unit * T::from_i64(y).unwrap(),
        ]
    }

    /// Nearest lattice coordinate to `p`, with the rounding residual in mm.
    pub(crate) fn point_to_lattice(&self, p: Point2<T>) -> ([i64; 2], T) {
        let scale = T::from_i64(1i64 << LATTICE_BITS).unwrap() / self.root_size;
        let mut out = [0i64; 2];
        let mut err = T::zero();
        for a in 0..2 {
            let v = (p[a] - self.origin[a]) * scale;
            let r = v.round();
            out[a] = r.to_i64().unwrap_or(0);
            err = err.max((v - r).abs() / scale);
        }
        (out, err)
    }
}
