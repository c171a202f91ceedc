use super::{Point, Polygon, Triangulation};
use crate::{Error, Result};
use std::fmt::Write;

/// Plain-text mesh export:
///
/// ```text
/// vertices N triangles M
/// x y            (N lines, lexicographic vertex order)
/// i j k          (M lines)
/// boundary i1 i2 ...
/// ```
pub fn write_mesh(tri: &Triangulation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices {} triangles {}", tri.num_vertices(), tri.num_triangles());
    for p in tri.points() {
        let _ = writeln!(out, "{} {}", p[0], p[1]);
    }
    for t in tri.triangles() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    out.push_str("boundary");
    for v in tri.boundary_vertices() {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}

/// Reads a mesh written by [`write_mesh`]; the domain must be supplied.
pub fn parse_mesh(text: &str, domain: Polygon) -> Result<Triangulation> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty mesh file".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "vertices" || h[2] != "triangles" {
        return Err(Error::Parse(format!("bad header: {header}")));
    }
    let nv: usize = h[1].parse().map_err(|_| Error::Parse(format!("bad count {}", h[1])))?;
    let nt: usize = h[3].parse().map_err(|_| Error::Parse(format!("bad count {}", h[3])))?;
    let mut points = Vec::with_capacity(nv);
    for _ in 0..nv {
        let l = lines.next().ok_or_else(|| Error::Parse("truncated vertex list".into()))?;
        points.push(parse_point(l)?);
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let l = lines.next().ok_or_else(|| Error::Parse("truncated triangle list".into()))?;
        let ids: Vec<usize> = l
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad index in '{l}'"))))
            .collect::<Result<_>>()?;
        if ids.len() != 3 || ids.iter().any(|&i| i >= nv) {
            return Err(Error::Parse(format!("bad triangle '{l}'")));
        }
        triangles.push([ids[0], ids[1], ids[2]]);
    }
    Ok(Triangulation::from_raw(domain, points, triangles))
}

/// Polygon file: one `x y` pair per line, counterclockwise; `#` comments.
pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let pts = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_point)
        .collect::<Result<Vec<_>>>()?;
    Polygon::new(pts)
}

fn parse_point(line: &str) -> Result<Point> {
    let v: Vec<f64> = line
        .split_whitespace()
        .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number in '{line}'"))))
        .collect::<Result<_>>()?;
    if v.len() != 2 {
        return Err(Error::Parse(format!("expected 'x y', got '{line}'")));
    }
    Ok([v[0], v[1]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::triangulate;

    #[test]
    fn export_layout() {
        let tri = triangulate(&Polygon::unit_square(), 0.5).unwrap();
        let text = write_mesh(&tri);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "vertices 9 triangles 8");
        assert_eq!(lines[1], "0 0");
        assert_eq!(lines[2], "0 0.5");
        assert_eq!(lines.len(), 1 + 9 + 8 + 1);
        assert_eq!(lines[18], "boundary 0 1 2 3 5 6 7 8");
        let back = parse_mesh(&text, tri.domain().clone()).unwrap();
        assert_eq!(back, tri);
    }

    #[test]
    fn polygon_file() {
        let p = parse_polygon("# square\n0 0\n1 0\n1 1\n0 1\n").unwrap();
        assert_eq!(p.area(), 1.0);
        assert!(parse_polygon("0 0\n1 0\nfoo\n").is_err());
    }
}
