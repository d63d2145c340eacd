//! Binary STL: 80-byte header, little-endian `u32` triangle count, then 50
//! bytes per triangle (normal and three vertices as `f32`, `u16` attribute).

use std::collections::HashMap;
use std::io::{self, Read, Write};

use nalgebra::Point3;

use super::mesh::TriangleMesh;

const HEADER: &[u8] = b"ccskit binary STL";

pub fn export_stl<W: Write>(mesh: &TriangleMesh, mut sink: W) -> io::Result<u64> {
    let count = u32::try_from(mesh.triangles.len())
        .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "too many triangles for STL"))?;
    let mut header = [0u8; 80];
    header[..HEADER.len()].copy_from_slice(HEADER);
    sink.write_all(&header)?;
    sink.write_all(&count.to_le_bytes())?;

    let mut record = [0u8; 50];
    for t in &mesh.triangles {
        let n = mesh.face_normal(t);
        let n = if n.norm() > 0.0 { n.normalize() } else { n };
        let mut floats = [0f32; 12];
        floats[..3].copy_from_slice(&[n.x as f32, n.y as f32, n.z as f32]);
        for (c, p) in mesh.corners(t).iter().enumerate() {
            floats[3 + 3 * c..6 + 3 * c].copy_from_slice(&[p.x as f32, p.y as f32, p.z as f32]);
        }
        for (slot, f) in floats.iter().enumerate() {
            record[4 * slot..4 * slot + 4].copy_from_slice(&f.to_le_bytes());
        }
        sink.write_all(&record)?;
    }
    sink.flush()?;
    Ok(80 + 4 + 50 * u64::from(count))
}

/// Reads a binary STL, merging vertices with bit-identical coordinates.
pub fn read_stl<R: Read>(mut source: R) -> io::Result<TriangleMesh> {
    let mut header = [0u8; 84];
    source.read_exact(&mut header)?;
    let count = u32::from_le_bytes(header[80..84].try_into().expect("4 bytes"));
    let mut mesh = TriangleMesh::default();
    let mut seen: HashMap<[u32; 3], u32> = HashMap::new();
    let mut record = [0u8; 50];
    for _ in 0..count {
        source.read_exact(&mut record)?;
        let f = |slot: usize| f32::from_le_bytes(record[4 * slot..4 * slot + 4].try_into().expect("4 bytes"));
        let mut tri = [0u32; 3];
        for (c, id) in tri.iter_mut().enumerate() {
            let xyz = [f(3 + 3 * c), f(4 + 3 * c), f(5 + 3 * c)];
            *id = *seen.entry(xyz.map(f32::to_bits)).or_insert_with(|| {
                mesh.vertices.push(Point3::new(f64::from(xyz[0]), f64::from(xyz[1]), f64::from(xyz[2])));
                (mesh.vertices.len() - 1) as u32
            });
        }
        mesh.triangles.push(tri);
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_triangle() -> TriangleMesh {
        TriangleMesh {
            vertices: vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)],
            triangles: vec![[0, 1, 2]],
        }
    }

    #[test]
    fn one_triangle_is_134_bytes() {
        let mut buf = Vec::new();
        let n = export_stl(&one_triangle(), &mut buf).unwrap();
        assert_eq!(n, 134);
        assert_eq!(buf.len(), 134);
        assert_eq!(u32::from_le_bytes(buf[80..84].try_into().unwrap()), 1);
        // normal +z
        assert_eq!(f32::from_le_bytes(buf[92..96].try_into().unwrap()), 1.0);
        assert_eq!(&buf[132..134], &[0, 0]);
        assert_eq!(read_stl(buf.as_slice()).unwrap(), one_triangle());
    }

    #[test]
    fn truncated_input_fails() {
        let mut buf = Vec::new();
        export_stl(&one_triangle(), &mut buf).unwrap();
        buf.truncate(120);
        assert!(read_stl(buf.as_slice()).is_err());
    }
}
