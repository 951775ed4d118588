//! Scheme file format, version 1. All integers little-endian.
//!
//! ```text
//! magic    8 bytes   "ATTNSCH\0"
//! version  u32
//! hlen     u32       length of the JSON header
//! header   hlen      {"q","n","l","m","vertices","width","classes":[[i,j],...]}
//! vertices |X| * m * (n + l) bytes, each vertex its RREF rows, row-major,
//!          entries as packed field elements
//! per class, in header order:
//!   nnz      u64
//!   row_ptr  (|X| + 1) x u32
//!   cols     nnz x u32, sorted within each row
//! ```

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{FieldContext, Index2, SchemeInstance, SchemeParams};
use crate::error::{Error, Result};

pub const FORMAT_MAGIC: &[u8; 8] = b"ATTNSCH\0";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    q: u64,
    n: i64,
    l: i64,
    m: i64,
    vertices: usize,
    width: usize,
    classes: Vec<Index2>,
}

fn io_err(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_scheme<W: Write>(inst: &SchemeInstance, mut out: W) -> Result<()> {
    let p = inst.params();
    let header = Header {
        q: p.q,
        n: p.n,
        l: p.l,
        m: p.m,
        vertices: inst.num_vertices(),
        width: inst.width(),
        classes: inst.domain().points().to_vec(),
    };
    let json = serde_json::to_vec(&header).map_err(|e| Error::Format(e.to_string()))?;
    out.write_all(FORMAT_MAGIC).map_err(io_err)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes()).map_err(io_err)?;
    out.write_all(&(json.len() as u32).to_le_bytes()).map_err(io_err)?;
    out.write_all(&json).map_err(io_err)?;
    out.write_all(inst.vertex_bytes()).map_err(io_err)?;
    let mut buf = Vec::new();
    for c in 0..inst.domain().len() {
        let a = inst.adjacency(c);
        buf.clear();
        buf.extend_from_slice(&(a.nnz() as u64).to_le_bytes());
        buf.extend(a.row_ptr.iter().flat_map(|v| v.to_le_bytes()));
        buf.extend(a.cols.iter().flat_map(|v| v.to_le_bytes()));
        out.write_all(&buf).map_err(io_err)?;
    }
    Ok(())
}

fn read_exact<R: Read>(r: &mut R, n: usize) -> Result<Vec<u8>> {
    let mut v = vec![0u8; n];
    r.read_exact(&mut v).map_err(io_err)?;
    Ok(v)
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    Ok(u32::from_le_bytes(read_exact(r, 4)?.try_into().unwrap()))
}

fn read_u32s<R: Read>(r: &mut R, n: usize) -> Result<Vec<u32>> {
    let raw = read_exact(r, 4 * n)?;
    Ok(raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
}

/// Parses a scheme file and re-checks axioms (i)-(iii) on the stored classes.
pub fn read_scheme<R: Read>(mut input: R) -> Result<SchemeInstance> {
    if read_exact(&mut input, 8)? != FORMAT_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = read_u32(&mut input)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let hlen = read_u32(&mut input)? as usize;
    let header: Header =
        serde_json::from_slice(&read_exact(&mut input, hlen)?).map_err(|e| Error::Format(e.to_string()))?;
    let params = SchemeParams::new(header.q, header.n, header.l, header.m)?;
    let domain = params.domain();
    if header.classes != domain.points() || header.width != (params.n + params.l) as usize {
        return Err(Error::Format("header disagrees with parameters".into()));
    }
    let expected = super::check_size(&params)?;
    let nv = header.vertices;
    if nv != expected {
        return Err(Error::Format(format!("{nv} vertices, parameters imply {expected}")));
    }
    let field = FieldContext::new(params.q)?;
    let chunk = params.m as usize * header.width;
    let vertices = read_exact(&mut input, nv * chunk)?;
    if vertices.iter().any(|&e| e as usize >= field.order()) {
        return Err(Error::Format("vertex entry outside the field".into()));
    }
    let mut relation = vec![u8::MAX; nv * nv];
    for c in 0..domain.len() {
        let nnz = u64::from_le_bytes(read_exact(&mut input, 8)?.try_into().unwrap()) as usize;
        if nnz > nv * nv {
            return Err(Error::Format("class larger than X x X".into()));
        }
        let row_ptr = read_u32s(&mut input, nv + 1)?;
        let cols = read_u32s(&mut input, nnz)?;
        if row_ptr[0] != 0 || row_ptr[nv] as usize != nnz || row_ptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format(format!("bad row pointers for class {c}")));
        }
        for x in 0..nv {
            let row = &cols[row_ptr[x] as usize..row_ptr[x + 1] as usize];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Format(format!("unsorted row {x} in class {c}")));
            }
            for &y in row {
                let slot = relation
                    .get_mut(x * nv + y as usize)
                    .filter(|_| (y as usize) < nv)
                    .ok_or_else(|| Error::Format("column index out of range".into()))?;
                if *slot != u8::MAX {
                    return Err(Error::Format(format!("pair ({x}, {y}) in two classes")));
                }
                *slot = c as u8;
            }
        }
    }
    if relation.contains(&u8::MAX) {
        return Err(Error::Format("classes do not cover X x X".into()));
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing).map_err(io_err)? != 0 {
        return Err(Error::Format("trailing bytes".into()));
    }
    let inst = SchemeInstance::assemble(params, field, domain, vertices, nv, relation);
    inst.check_basic_axioms()?;
    Ok(inst)
}
