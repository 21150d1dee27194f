//! Binary model file: `OWMC`, u32 format version, u32 hash bits, u32 order
//! count and orders, u32 class count and length-prefixed UTF-8 class names,
//! u64 weight count, then row-major little-endian `f32` weights.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::ClassifierModel;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"OWMC";
const VERSION: u32 = 1;

impl ClassifierModel {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&self.hash_bits.to_le_bytes())?;
        w.write_all(&(self.ngram_orders.len() as u32).to_le_bytes())?;
        for order in &self.ngram_orders {
            w.write_all(&order.to_le_bytes())?;
        }
        w.write_all(&(self.class_names.len() as u32).to_le_bytes())?;
        for name in &self.class_names {
            w.write_all(&(name.len() as u32).to_le_bytes())?;
            w.write_all(name.as_bytes())?;
        }
        w.write_all(&(self.weights.len() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.weights.len() * 4);
        for weight in &self.weights {
            buf.extend_from_slice(&weight.to_le_bytes());
        }
        w.write_all(&buf)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(truncated)?;
        if &magic != MAGIC {
            return Err(Error::ModelFormat("bad magic bytes".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::ModelFormat(format!("unsupported format version {version}")));
        }
        let hash_bits = read_u32(&mut r)?;
        let order_count = read_u32(&mut r)?;
        if order_count > 8 {
            return Err(Error::ModelFormat(format!("implausible order count {order_count}")));
        }
        let ngram_orders = (0..order_count)
            .map(|_| read_u32(&mut r))
            .collect::<Result<Vec<_>>>()?;
        let class_count = read_u32(&mut r)?;
        if class_count > 4096 {
            return Err(Error::ModelFormat(format!("implausible class count {class_count}")));
        }
        let mut class_names = Vec::with_capacity(class_count as usize);
        for _ in 0..class_count {
            let len = read_u32(&mut r)? as usize;
            if len > 1024 {
                return Err(Error::ModelFormat("class name too long".into()));
            }
            let mut bytes = vec![0u8; len];
            r.read_exact(&mut bytes).map_err(truncated)?;
            class_names.push(
                String::from_utf8(bytes).map_err(|_| Error::ModelFormat("class name is not UTF-8".into()))?,
            );
        }
        let mut count = [0u8; 8];
        r.read_exact(&mut count).map_err(truncated)?;
        let count = u64::from_le_bytes(count);
        if hash_bits > 28 || count != (1u64 << hash_bits) * u64::from(class_count) {
            return Err(Error::ModelFormat(format!(
                "weight count {count} does not match {hash_bits} hash bits × {class_count} classes"
            )));
        }
        let mut raw = vec![0u8; count as usize * 4];
        r.read_exact(&mut raw).map_err(truncated)?;
        let weights = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::ModelFormat("trailing bytes after weights".into()));
        }
        ClassifierModel::from_parts(hash_bits, ngram_orders, class_names, weights)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Open {
            path: path.to_owned(),
            source,
        })?;
        self.write_to(BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| Error::Open {
            path: path.to_owned(),
            source,
        })?;
        Self::read_from(BufReader::new(file))
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(truncated)?;
    Ok(u32::from_le_bytes(b))
}

fn truncated(_: std::io::Error) -> Error {
    Error::ModelFormat("file truncated".into())
}
