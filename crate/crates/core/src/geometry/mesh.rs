use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::slit::LatticeSlit;
use super::{
    CellId, Domain, NodeId, QuadCell, Quadrant, Side, Slit, DEFAULT_MAX_DEPTH, LATTICE_BITS,
};
use crate::error::MeshError;
use crate::scalar::{Point2, Real};

/// Lattice position of a node plus the slit face it belongs to. `face` is
/// true only for the positive-side copy of a duplicated slit node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub(crate) struct NodeKey {
    x: i64,
    y: i64,
    face: bool,
}

/// One leaf cell seen as a polygonal element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonElement {
    pub id: usize,
    pub cell: CellId,
    /// Counter-clockwise vertex loop starting at the south-west corner.
    pub nodes: Vec<NodeId>,
}

/// How a node created during refinement relates to the mesh it refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeOrigin {
    /// Centre of a split leaf.
    Center { cell: CellId },
    /// Midpoint of the straight edge between two existing nodes.
    EdgeMidpoint { a: NodeId, b: NodeId },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RefineReport {
    /// Leaves that were split, requested ones first, then balancing ripples.
    pub split: Vec<CellId>,
    pub new_nodes: Vec<(NodeId, NodeOrigin)>,
    /// Requested cells that were skipped because they already sit at max depth.
    pub clamped: Vec<CellId>,
}

/// Neighbourhood of one cell edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeNeighbor {
    Boundary,
    Same(CellId),
    Coarser(CellId),
    /// Finer leaves along the edge, ordered by increasing coordinate.
    Finer(Vec<CellId>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
#[serde(into = "MeshData<T>", from = "MeshData<T>")]
pub struct QuadtreeMesh<T> {
    domain: Domain<T>,
    slit: Option<Slit<T>>,
    lattice_slit: Option<LatticeSlit>,
    max_depth: u32,
    cells: Vec<QuadCell<T>>,
    roots: Vec<CellId>,
    cell_index: HashMap<(u32, i64, i64), CellId>,
    nodes: Vec<Point2<T>>,
    node_keys: Vec<NodeKey>,
    node_index: HashMap<NodeKey, NodeId>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct MeshData<T> {
    domain: Domain<T>,
    slit: Option<Slit<T>>,
    lattice_slit: Option<LatticeSlit>,
    max_depth: u32,
    cells: Vec<QuadCell<T>>,
    roots: Vec<CellId>,
    node_keys: Vec<NodeKey>,
}

impl<T: Real> From<QuadtreeMesh<T>> for MeshData<T> {
    fn from(m: QuadtreeMesh<T>) -> Self {
        Self {
            domain: m.domain,
            slit: m.slit,
            lattice_slit: m.lattice_slit,
            max_depth: m.max_depth,
            cells: m.cells,
            roots: m.roots,
            node_keys: m.node_keys,
        }
    }
}

impl<T: Real> From<MeshData<T>> for QuadtreeMesh<T> {
    fn from(d: MeshData<T>) -> Self {
        let cell_index = d
            .cells
            .iter()
            .map(|c| ((c.level, c.index[0], c.index[1]), c.id))
            .collect();
        let nodes = d
            .node_keys
            .iter()
            .map(|k| d.domain.lattice_to_point(k.x, k.y))
            .collect();
        let node_index = d
            .node_keys
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i))
            .collect();
        Self {
            domain: d.domain,
            slit: d.slit,
            lattice_slit: d.lattice_slit,
            max_depth: d.max_depth,
            cells: d.cells,
            roots: d.roots,
            cell_index,
            nodes,
            node_keys: d.node_keys,
            node_index,
        }
    }
}

impl<T: Real> QuadtreeMesh<T> {
    /// Uniform quadtree of the given depth over `domain`, with an optional
    /// geometric slit whose nodes are duplicated.
    pub fn build_initial_mesh(
        domain: Domain<T>,
        uniform_depth: u32,
        slit: Option<Slit<T>>,
    ) -> Result<Self, MeshError> {
        if domain.roots.is_empty() {
            return Err(MeshError::EmptyDomain);
        }
        if uniform_depth > LATTICE_BITS {
            return Err(MeshError::DepthLimit {
                depth: uniform_depth,
                limit: LATTICE_BITS,
            });
        }
        let lattice_slit = match &slit {
            Some(s) => Some(LatticeSlit::resolve(s, &domain, uniform_depth)?),
            None => None,
        };
        let mut mesh = Self {
            domain,
            slit,
            lattice_slit,
            max_depth: DEFAULT_MAX_DEPTH.max(uniform_depth),
            cells: Vec::new(),
            roots: Vec::new(),
            cell_index: HashMap::new(),
            nodes: Vec::new(),
            node_keys: Vec::new(),
            node_index: HashMap::new(),
        };
        let placements = mesh.domain.roots.clone();
        for r in placements {
            let id = mesh.push_cell(0, r, None);
            mesh.roots.push(id);
            for p in mesh.corners(id) {
                mesh.ensure_node(id, p);
            }
        }
        if let Some(ls) = mesh.lattice_slit {
            let (lo, hi) = mesh.lattice_bounds();
            let other = 1 - ls.axis;
            let inside = |v: i64, a: usize| lo[a] <= v && v <= hi[a];
            if !inside(ls.line, other) || !inside(ls.mouth, ls.axis) || !inside(ls.tip, ls.axis) {
                return Err(MeshError::InvalidSlit("slit leaves the domain".into()));
            }
        }
        let mut scratch = RefineReport::default();
        let mut frontier = mesh.roots.clone();
        for _ in 0..uniform_depth {
            let mut next = Vec::with_capacity(frontier.len() * 4);
            for c in frontier {
                next.extend(mesh.split(c, &mut scratch));
            }
            frontier = next;
        }
        Ok(mesh)
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Result<Self, MeshError> {
        self.set_max_depth(max_depth)?;
        Ok(self)
    }

    pub fn set_max_depth(&mut self, max_depth: u32) -> Result<(), MeshError> {
        if max_depth > LATTICE_BITS {
            return Err(MeshError::DepthLimit {
                depth: max_depth,
                limit: LATTICE_BITS,
            });
        }
        self.max_depth = max_depth;
        Ok(())
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn slit(&self) -> Option<&Slit<T>> {
        self.slit.as_ref()
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn cells(&self) -> &[QuadCell<T>] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &QuadCell<T> {
        &self.cells[id]
    }

    pub fn roots(&self) -> &[CellId] {
        &self.roots
    }

    pub fn nodes(&self) -> &[Point2<T>] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Point2<T> {
        self.nodes[id]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Edge length of the finest possible leaf.
    pub fn min_cell_size(&self) -> T {
        self.domain.root_size / T::from_i64(1i64 << self.max_depth).unwrap()
    }

    /// Leaves in depth-first order (roots in order, children SW, SE, NW, NE).
    /// Element ids follow this order.
    pub fn leaves(&self) -> Vec<CellId> {
        let mut out = Vec::new();
        let mut stack: Vec<CellId> = self.roots.iter().rev().copied().collect();
        while let Some(c) = stack.pop() {
            match self.cells[c].children {
                None => out.push(c),
                Some(ch) => stack.extend(ch.iter().rev()),
            }
        }
        out
    }

    pub fn num_leaves(&self) -> usize {
        self.cells.iter().filter(|c| c.is_leaf()).count()
    }

    pub fn max_leaf_level(&self) -> u32 {
        self.cells
            .iter()
            .filter(|c| c.is_leaf())
            .map(|c| c.level)
            .max()
            .unwrap_or(0)
    }

    /// Node pairs `(negative face, positive face)` duplicated along the slit.
    pub fn slit_node_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out: Vec<_> = self
            .node_keys
            .iter()
            .enumerate()
            .filter(|(_, k)| k.face)
            .filter_map(|(i, k)| {
                self.node_index
                    .get(&NodeKey { face: false, ..*k })
                    .map(|&j| (j, i))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Crack face of every node: `1` on the positive face of the slit, `-1` on
    /// the negative face, `0` elsewhere (including the shared tip).
    pub fn slit_faces(&self) -> Vec<i8> {
        let mut out = vec![0i8; self.nodes.len()];
        for (neg, pos) in self.slit_node_pairs() {
            out[neg] = -1;
            out[pos] = 1;
        }
        out
    }

    fn lattice_bounds(&self) -> ([i64; 2], [i64; 2]) {
        let mut lo = [i64::MAX; 2];
        let mut hi = [i64::MIN; 2];
        for &r in &self.roots {
            let (a, b) = self.cells[r].lattice_span();
            for k in 0..2 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        (lo, hi)
    }

    fn push_cell(&mut self, level: u32, index: [i64; 2], parent: Option<CellId>) -> CellId {
        let id = self.cells.len();
        let size = self.domain.root_size / T::from_i64(1i64 << level).unwrap();
        let w = 1i64 << (LATTICE_BITS - level);
        let origin = self.domain.lattice_to_point(index[0] * w, index[1] * w);
        self.cells.push(QuadCell {
            id,
            level,
            index,
            origin,
            size,
            parent,
            children: None,
        });
        self.cell_index.insert((level, index[0], index[1]), id);
        id
    }

    /// Corner lattice points in SW, SE, NE, NW order.
    fn corners(&self, id: CellId) -> [[i64; 2]; 4] {
        let (lo, hi) = self.cells[id].lattice_span();
        [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]
    }

    /// Edge midpoints in S, E, N, W order.
    fn midpoints(&self, id: CellId) -> [[i64; 2]; 4] {
        let (lo, hi) = self.cells[id].lattice_span();
        let m = [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2];
        [[m[0], lo[1]], [hi[0], m[1]], [m[0], hi[1]], [lo[0], m[1]]]
    }

    fn key_for(&self, cell: CellId, p: [i64; 2]) -> NodeKey {
        let face = match &self.lattice_slit {
            Some(s) if s.holds(p) => {
                let (lo, hi) = self.cells[cell].lattice_span();
                debug_assert!(!s.cuts(lo, hi) || self.cells[cell].children.is_some());
                s.positive_side(lo)
            }
            _ => false,
        };
        NodeKey {
            x: p[0],
            y: p[1],
            face,
        }
    }

    fn find_node(&self, cell: CellId, p: [i64; 2]) -> Option<NodeId> {
        self.node_index.get(&self.key_for(cell, p)).copied()
    }

    fn ensure_node(&mut self, cell: CellId, p: [i64; 2]) -> (NodeId, bool) {
        let key = self.key_for(cell, p);
        if let Some(&id) = self.node_index.get(&key) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.nodes.push(self.domain.lattice_to_point(p[0], p[1]));
        self.node_keys.push(key);
        self.node_index.insert(key, id);
        (id, true)
    }

    /// Splits a leaf into four children, creating any missing corner nodes.
    fn split(&mut self, id: CellId, report: &mut RefineReport) -> [CellId; 4] {
        debug_assert!(self.cells[id].is_leaf());
        let level = self.cells[id].level + 1;
        let base = self.cells[id].index;
        let mut children = [0; 4];
        for q in Quadrant::ALL {
            let off = q.offset();
            children[q as usize] = self.push_cell(
                level,
                [2 * base[0] + off[0], 2 * base[1] + off[1]],
                Some(id),
            );
        }
        self.cells[id].children = Some(children);
        report.split.push(id);

        let parent_corners = self.corners(id);
        let parent_mids = self.midpoints(id);
        let (lo, hi) = self.cells[id].lattice_span();
        let center = [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2];
        for &ch in &children {
            for p in self.corners(ch) {
                let (node, created) = self.ensure_node(ch, p);
                if !created {
                    continue;
                }
                let origin = if p == center {
                    NodeOrigin::Center { cell: id }
                } else {
                    let k = parent_mids
                        .iter()
                        .position(|m| *m == p)
                        .expect("new child corner is a parent edge midpoint");
                    let a = self.find_node(id, parent_corners[k]);
                    let b = self.find_node(id, parent_corners[(k + 1) % 4]);
                    match (a, b) {
                        (Some(a), Some(b)) => NodeOrigin::EdgeMidpoint { a, b },
                        // Only reachable while an initial root straddling the slit
                        // is subdivided; those origins are never consumed.
                        _ => NodeOrigin::Center { cell: id },
                    }
                };
                report.new_nodes.push((node, origin));
            }
        }
        children
    }

    /// Splits every listed leaf and ripples further splits until adjacent
    /// leaves differ by at most one level.
    pub fn refine_cells(&mut self, ids: &[CellId]) -> Result<RefineReport, MeshError> {
        let mut too_deep = Vec::new();
        for &c in ids {
            if c >= self.cells.len() || !self.cells[c].is_leaf() {
                return Err(MeshError::NotALeaf(c));
            }
            if self.cells[c].level >= self.max_depth {
                too_deep.push(c);
            }
        }
        if !too_deep.is_empty() {
            too_deep.sort_unstable();
            too_deep.dedup();
            return Err(MeshError::MaxDepthExceeded {
                max_depth: self.max_depth,
                cells: too_deep,
            });
        }
        let mut order = ids.to_vec();
        order.sort_unstable();
        order.dedup();
        let mut report = RefineReport::default();
        let mut queue: VecDeque<CellId> = order.into();
        while let Some(c) = queue.pop_front() {
            if !self.cells[c].is_leaf() {
                continue;
            }
            let children = self.split(c, &mut report);
            for ch in children {
                for side in Side::ALL {
                    if let EdgeNeighbor::Coarser(n) = self.neighbor(ch, side) {
                        if self.cells[n].level + 1 < self.cells[ch].level {
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Like [`refine_cells`](Self::refine_cells) but drops requests at max
    /// depth with a warning instead of failing.
    pub fn refine_cells_clamped(&mut self, ids: &[CellId]) -> Result<RefineReport, MeshError> {
        let (ok, clamped): (Vec<CellId>, Vec<CellId>) = ids
            .iter()
            .partition(|&&c| c < self.cells.len() && self.cells[c].level < self.max_depth);
        if !clamped.is_empty() {
            log::warn!(
                "{} refinement request(s) clamped at max depth {}",
                clamped.len(),
                self.max_depth
            );
        }
        let mut report = self.refine_cells(&ok)?;
        report.clamped = clamped;
        Ok(report)
    }

    /// Leaf (or leaves) across one edge of `id`.
    pub fn neighbor(&self, id: CellId, side: Side) -> EdgeNeighbor {
        let c = &self.cells[id];
        let s = side.step();
        let ni = c.index[0] + s[0];
        let nj = c.index[1] + s[1];
        if let Some(&n) = self.cell_index.get(&(c.level, ni, nj)) {
            if self.cells[n].is_leaf() {
                return EdgeNeighbor::Same(n);
            }
            let facing = match side {
                Side::South => Side::North,
                Side::North => Side::South,
                Side::East => Side::West,
                Side::West => Side::East,
            };
            let mut out = Vec::new();
            self.collect_edge_leaves(n, facing, &mut out);
            return EdgeNeighbor::Finer(out);
        }
        for l in (0..c.level).rev() {
            let sh = c.level - l;
            if let Some(&n) = self.cell_index.get(&(l, ni >> sh, nj >> sh)) {
                debug_assert!(self.cells[n].is_leaf());
                return EdgeNeighbor::Coarser(n);
            }
        }
        EdgeNeighbor::Boundary
    }

    fn collect_edge_leaves(&self, id: CellId, side: Side, out: &mut Vec<CellId>) {
        match self.cells[id].children {
            None => out.push(id),
            Some(ch) => {
                let pick = match side {
                    Side::South => [Quadrant::SouthWest, Quadrant::SouthEast],
                    Side::North => [Quadrant::NorthWest, Quadrant::NorthEast],
                    Side::West => [Quadrant::SouthWest, Quadrant::NorthWest],
                    Side::East => [Quadrant::SouthEast, Quadrant::NorthEast],
                };
                for q in pick {
                    self.collect_edge_leaves(ch[q as usize], side, out);
                }
            }
        }
    }

    /// Neighbours of a leaf across its S, E, N, W edges.
    pub fn leaf_adjacency(&self, id: CellId) -> [EdgeNeighbor; 4] {
        Side::ALL.map(|s| self.neighbor(id, s))
    }

    /// 2:1 balance over all leaf pairs that share an edge segment.
    pub fn is_balanced(&self) -> bool {
        self.cells.iter().filter(|c| c.is_leaf()).all(|c| {
            Side::ALL.iter().all(|&s| match self.neighbor(c.id, s) {
                EdgeNeighbor::Finer(v) => v.iter().all(|&n| self.cells[n].level == c.level + 1),
                EdgeNeighbor::Coarser(n) => self.cells[n].level + 1 == c.level,
                _ => true,
            })
        })
    }

    /// One polygon per leaf with hanging nodes inserted in CCW order.
    pub fn extract_elements(&self) -> Vec<PolygonElement> {
        self.leaves()
            .into_iter()
            .enumerate()
            .map(|(id, cell)| PolygonElement {
                id,
                cell,
                nodes: self.element_loop(cell),
            })
            .collect()
    }

    fn element_loop(&self, cell: CellId) -> Vec<NodeId> {
        let corners = self.corners(cell);
        let mids = self.midpoints(cell);
        let mut nodes = Vec::with_capacity(8);
        for k in 0..4 {
            nodes.push(
                self.find_node(cell, corners[k])
                    .expect("leaf corners are always nodes"),
            );
            if let Some(m) = self.find_node(cell, mids[k]) {
                nodes.push(m);
            }
        }
        nodes
    }

    /// Leaf containing `p`; points on shared edges resolve to the upper/right cell.
    pub fn locate_leaf(&self, p: Point2<T>) -> Option<CellId> {
        let root = self
            .roots
            .iter()
            .copied()
            .find(|&r| self.cells[r].contains(p))?;
        let mut c = root;
        while let Some(ch) = self.cells[c].children {
            let m = self.cells[c].center();
            let q = match (p[0] >= m[0], p[1] >= m[1]) {
                (false, false) => Quadrant::SouthWest,
                (true, false) => Quadrant::SouthEast,
                (false, true) => Quadrant::NorthWest,
                (true, true) => Quadrant::NorthEast,
            };
            c = ch[q as usize];
        }
        Some(c)
    }

    /// Nodes that sit mid-edge of at least one element.
    pub fn hanging_nodes(&self, elements: &[PolygonElement]) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = elements
            .iter()
            .flat_map(|e| {
                let corners = self.corners(e.cell);
                e.nodes
                    .iter()
                    .copied()
                    .filter(move |&n| {
                        let k = self.node_keys[n];
                        !corners.contains(&[k.x, k.y])
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(depth: u32) -> QuadtreeMesh<f64> {
        QuadtreeMesh::build_initial_mesh(Domain::square([0.0, 0.0], 1.0), depth, None).unwrap()
    }

    fn signed_area(mesh: &QuadtreeMesh<f64>, e: &PolygonElement) -> f64 {
        let n = e.nodes.len();
        (0..n)
            .map(|i| {
                let a = mesh.node(e.nodes[i]);
                let b = mesh.node(e.nodes[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
            * 0.5
    }

    #[test]
    fn uniform_counts() {
        let m = unit(3);
        assert_eq!(m.num_leaves(), 64);
        assert_eq!(m.num_nodes(), 81);
        assert!(m.extract_elements().iter().all(|e| e.nodes.len() == 4));
        let m0 = unit(0);
        assert_eq!(m0.num_leaves(), 1);
        assert_eq!(m0.num_nodes(), 4);
    }

    #[test]
    fn slit_duplicates_all_but_tip() {
        let m = QuadtreeMesh::build_initial_mesh(
            Domain::square([0.0, 0.0], 1.0),
            4,
            Some(Slit::new([0.0, 0.5], [0.5, 0.5])),
        )
        .unwrap();
        assert_eq!(m.num_nodes(), 297);
        let pairs = m.slit_node_pairs();
        assert_eq!(pairs.len(), 8);
        let elems = m.extract_elements();
        for e in &elems {
            let has_neg = e.nodes.iter().any(|n| pairs.iter().any(|p| p.0 == *n));
            let has_pos = e.nodes.iter().any(|n| pairs.iter().any(|p| p.1 == *n));
            assert!(!(has_neg && has_pos), "element {} spans both faces", e.id);
        }
    }

    #[test]
    fn misaligned_slit_rejected() {
        let err = QuadtreeMesh::build_initial_mesh(
            Domain::square([0.0, 0.0], 1.0),
            2,
            Some(Slit::new([0.0, 0.3], [0.5, 0.3])),
        )
        .unwrap_err();
        assert!(matches!(err, MeshError::InvalidSlit(_)));
        let diag = QuadtreeMesh::build_initial_mesh(
            Domain::square([0.0, 0.0], 1.0),
            2,
            Some(Slit::new([0.0, 0.0], [0.5, 0.5])),
        );
        assert!(diag.is_err());
    }

    #[test]
    fn single_refine_gives_seven_leaves() {
        let mut m = unit(1);
        let sw = m.leaves()[0];
        m.refine_cells(&[sw]).unwrap();
        assert_eq!(m.num_leaves(), 7);
        assert!(m.is_balanced());
    }

    #[test]
    fn pentagon_from_finer_east_neighbor() {
        let mut m = unit(1);
        // leaves in DFS order: SW, SE, NW, NE
        let leaves = m.leaves();
        m.refine_cells(&[leaves[1]]).unwrap();
        let elems = m.extract_elements();
        let sw = elems.iter().find(|e| e.cell == leaves[0]).unwrap();
        assert_eq!(sw.nodes.len(), 5);
        let hanging = m.node(sw.nodes[2]);
        assert_eq!(hanging, [0.5, 0.25]);
        assert!(signed_area(&m, sw) > 0.0);
    }

    #[test]
    fn max_depth_error_lists_cells() {
        let mut m = unit(2).with_max_depth(2).unwrap();
        let l = m.leaves();
        let err = m.refine_cells(&[l[3], l[0]]).unwrap_err();
        assert_eq!(
            err,
            MeshError::MaxDepthExceeded {
                max_depth: 2,
                cells: vec![l[0], l[3]]
            }
        );
        let rep = m.refine_cells_clamped(&[l[0]]).unwrap();
        assert_eq!(rep.clamped, vec![l[0]]);
        assert!(rep.split.is_empty());
    }

    #[test]
    fn refining_non_leaf_is_error() {
        let mut m = unit(1);
        assert_eq!(m.refine_cells(&[0]), Err(MeshError::NotALeaf(0)));
    }

    #[test]
    fn serde_roundtrip_rebuilds_indices() {
        let mut m = unit(2);
        let l = m.leaves();
        m.refine_cells(&[l[5]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: QuadtreeMesh<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back.extract_elements(), m.extract_elements());
        assert_eq!(back.nodes(), m.nodes());
    }
}
