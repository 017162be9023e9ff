use std::io::{Read, Write};
use std::path::Path;

use super::config::PathFormat;
use crate::error::{Error, Result};
use crate::simulation::{PathMeta, SampledPath};
use crate::C64;

pub const MAGIC: [u8; 4] = *b"FIAR";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 + 8;

pub fn write_path<W: Write>(p: &SampledPath, format: PathFormat, w: W) -> Result<()> {
    match format {
        PathFormat::Csv => write_csv(p, w),
        PathFormat::Binary => write_binary(p, w),
    }
}

/// Reads either format, recognized by the leading magic bytes.
pub fn read_path<R: Read>(mut r: R) -> Result<SampledPath> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.starts_with(&MAGIC) {
        read_binary(&bytes)
    } else {
        read_csv(&bytes)
    }
}

pub fn read_path_file(path: &Path) -> Result<SampledPath> {
    read_path(std::fs::File::open(path)?)
}

fn write_csv<W: Write>(p: &SampledPath, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    for i in 1..=p.dim() {
        header.push(format!("coord_{i}_re"));
        header.push(format!("coord_{i}_im"));
    }
    out.write_record(&header).map_err(csv_err)?;
    let mut rec = Vec::with_capacity(header.len());
    for (t, row) in p.rows().enumerate() {
        rec.clear();
        rec.push(t.to_string());
        for z in row {
            rec.push(format!("{:?}", z.re));
            rec.push(format!("{:?}", z.im));
        }
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}

fn read_csv(bytes: &[u8]) -> Result<SampledPath> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let cols = header.len();
    if cols < 3 || cols % 2 != 1 || &header[0] != "t" {
        return Err(Error::Format(format!(
            "path csv header must be t,coord_1_re,coord_1_im,..; got {} columns",
            cols
        )));
    }
    for i in 0..(cols - 1) / 2 {
        let (re, im) = (&header[1 + 2 * i], &header[2 + 2 * i]);
        if re != format!("coord_{}_re", i + 1) || im != format!("coord_{}_im", i + 1) {
            return Err(Error::Format(format!("unexpected path csv columns {re},{im}")));
        }
    }
    let n = (cols - 1) / 2;
    let mut values = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != cols {
            return Err(Error::Format(format!("row {line}: expected {cols} fields")));
        }
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Format(format!("row {line}: not a number: {s:?}")))
        };
        for i in 0..n {
            values.push(C64::new(num(&rec[1 + 2 * i])?, num(&rec[2 + 2 * i])?));
        }
    }
    if values.is_empty() {
        return Err(Error::Format("empty path".into()));
    }
    SampledPath::new(n, values, PathMeta::default())
}

fn write_binary<W: Write>(p: &SampledPath, mut w: W) -> Result<()> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * p.values().len());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    let n = u32::try_from(p.dim()).map_err(|_| Error::Format("dimension exceeds u32".into()))?;
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&(p.len() as u64).to_le_bytes());
    for z in p.values() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn read_binary(bytes: &[u8]) -> Result<SampledPath> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format("truncated header".into()));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}, expected {VERSION}")));
    }
    let n = u32::from_le_bytes(bytes[6..10].try_into().expect("4 bytes")) as usize;
    let t = u64::from_le_bytes(bytes[10..18].try_into().expect("8 bytes"));
    if t == 0 {
        return Err(Error::Format("empty path".into()));
    }
    let expected = (t as u128) * (n as u128) * 16;
    let body = &bytes[HEADER_LEN..];
    if (body.len() as u128) < expected {
        return Err(Error::Format(format!(
            "truncated file: {} of {expected} data bytes",
            body.len()
        )));
    }
    if body.len() as u128 > expected {
        return Err(Error::Format("trailing bytes after path data".into()));
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            )
        })
        .collect();
    SampledPath::new(n, values, PathMeta::default())
}
