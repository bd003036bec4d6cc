use std::io::{self, Write};

use super::{PolygonElement, QuadtreeMesh};
use crate::scalar::{Point2, Real};

/// Named data arrays attached to a VTK snapshot.
#[derive(Debug, Default)]
pub struct VtkData<'a, T> {
    pub point_scalars: Vec<(&'a str, &'a [T])>,
    /// Two components per node, interleaved.
    pub point_vectors: Vec<(&'a str, &'a [T])>,
    pub cell_scalars: Vec<(&'a str, &'a [T])>,
}

/// Writes an ASCII legacy-VTK unstructured grid with one `VTK_POLYGON` cell
/// per element.
pub fn write_vtk_mesh<T: Real, W: Write>(
    w: &mut W,
    title: &str,
    nodes: &[Point2<T>],
    elements: &[PolygonElement],
    data: &VtkData<'_, T>,
) -> io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{}", title.lines().next().unwrap_or(""))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", nodes.len())?;
    for p in nodes {
        writeln!(w, "{:e} {:e} 0", p[0].to_f64_lossy(), p[1].to_f64_lossy())?;
    }
    let size: usize = elements.iter().map(|e| e.nodes.len() + 1).sum();
    writeln!(w, "CELLS {} {}", elements.len(), size)?;
    for e in elements {
        write!(w, "{}", e.nodes.len())?;
        for n in &e.nodes {
            write!(w, " {n}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "CELL_TYPES {}", elements.len())?;
    for _ in elements {
        writeln!(w, "7")?;
    }
    if !data.point_scalars.is_empty() || !data.point_vectors.is_empty() {
        writeln!(w, "POINT_DATA {}", nodes.len())?;
        for (name, values) in &data.point_scalars {
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for v in values.iter() {
                writeln!(w, "{:e}", v.to_f64_lossy())?;
            }
        }
        for (name, values) in &data.point_vectors {
            writeln!(w, "VECTORS {name} double")?;
            for v in values.chunks_exact(2) {
                writeln!(w, "{:e} {:e} 0", v[0].to_f64_lossy(), v[1].to_f64_lossy())?;
            }
        }
    }
    if !data.cell_scalars.is_empty() {
        writeln!(w, "CELL_DATA {}", elements.len())?;
        for (name, values) in &data.cell_scalars {
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for v in values.iter() {
                writeln!(w, "{:e}", v.to_f64_lossy())?;
            }
        }
    }
    Ok(())
}

/// Plain-text dump of every cell: `id level origin_x origin_y size`.
pub fn write_tree_dump<T: Real, W: Write>(w: &mut W, mesh: &QuadtreeMesh<T>) -> io::Result<()> {
    writeln!(w, "# id level x y size")?;
    for c in mesh.cells() {
        writeln!(
            w,
            "{} {} {:e} {:e} {:e}",
            c.id,
            c.level,
            c.origin[0].to_f64_lossy(),
            c.origin[1].to_f64_lossy(),
            c.size.to_f64_lossy()
        )?;
    }
    Ok(())
}

/// Parses the output of [`write_tree_dump`].
pub fn parse_tree_dump(text: &str) -> Result<Vec<(usize, u32, [f64; 2], f64)>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let bad = || format!("line {}: malformed tree record", i + 1);
            if f.len() != 5 {
                return Err(bad());
            }
            Ok((
                f[0].parse().map_err(|_| bad())?,
                f[1].parse().map_err(|_| bad())?,
                [f[2].parse().map_err(|_| bad())?, f[3].parse().map_err(|_| bad())?],
                f[4].parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}
