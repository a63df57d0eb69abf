use std::io::Write;

use crate::scalar::Real;

use super::Mesh;

/// Writes the plain-text mesh dump: a header `OFF-like: V T`, then one
/// `x y` line per vertex and one `i j k` line per triangle.
pub fn write_mesh<T: Real, W: Write>(mesh: &Mesh<T>, mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "OFF-like: {} {}",
        mesh.num_vertices(),
        mesh.num_elements()
    )?;
    for p in mesh.vertices() {
        writeln!(out, "{} {}", p.x, p.y)?;
    }
    for [a, b, c] in mesh.triangles() {
        writeln!(out, "{a} {b} {c}")?;
    }
    Ok(())
}
