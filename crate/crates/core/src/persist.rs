//! Binary framing shared by every structure.
//!
//! Each frame starts with an 8-byte magic tag and a format version byte.
//! Integers are little-endian. Writers report what they wrote as a
//! [`SizeTree`] so size breakdowns come from the exact bytes on disk.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tooling::size::SizeTree;

pub const FORMAT_VERSION: u8 = 1;

pub type Magic = [u8; 8];

/// Write adapter that counts bytes.
pub struct CountingWriter<W> {
    inner: W,
    written: u64,
}

impl<W: Write> CountingWriter<W> {
    pub fn new(inner: W) -> Self {
        CountingWriter { inner, written: 0 }
    }

    pub fn position(&self) -> u64 {
        self.written
    }

    pub fn into_inner(self) -> W {
        self.inner
    }

    pub fn get_mut(&mut self) -> &mut W {
        &mut self.inner
    }
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.written += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Open size node; closed once all of a structure's bytes are written.
pub struct NodeBuilder {
    name: String,
    start: u64,
    children: Vec<SizeTree>,
}

impl NodeBuilder {
    pub fn open<W: Write>(name: &str, w: &CountingWriter<W>) -> Self {
        NodeBuilder { name: name.to_string(), start: w.position(), children: Vec::new() }
    }

    pub fn child(&mut self, tree: SizeTree) {
        self.children.push(tree);
    }

    pub fn close<W: Write>(self, w: &CountingWriter<W>) -> SizeTree {
        SizeTree::new(self.name, w.position() - self.start, self.children)
    }
}

/// Serializable structure.
pub trait Persist: Sized {
    /// Writes the structure and returns the size breakdown of what was written.
    fn write_to<W: Write>(&self, w: &mut CountingWriter<W>, name: &str) -> Result<SizeTree>;

    fn read_from<R: Read>(r: &mut R) -> Result<Self>;

    /// Serializes into memory.
    fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = CountingWriter::new(Vec::new());
        self.write_to(&mut w, "root")?;
        Ok(w.into_inner())
    }

    fn from_bytes(mut bytes: &[u8]) -> Result<Self> {
        Self::read_from(&mut bytes)
    }

    /// Size breakdown without touching the disk.
    fn size_tree(&self, name: &str) -> Result<SizeTree> {
        let mut w = CountingWriter::new(io::sink());
        self.write_to(&mut w, name)
    }

    fn save(&self, path: &Path) -> Result<SizeTree> {
        let mut w = CountingWriter::new(BufWriter::new(File::create(path)?));
        let tree = self.write_to(&mut w, "root")?;
        w.flush()?;
        Ok(tree)
    }

    fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        Self::read_from(&mut r)
    }
}

pub fn write_header<W: Write>(w: &mut W, magic: &Magic) -> Result<()> {
    w.write_all(magic)?;
    w.write_all(&[FORMAT_VERSION])?;
    Ok(())
}

pub fn read_header<R: Read>(r: &mut R, magic: &Magic) -> Result<()> {
    let mut tag = [0u8; 8];
    read_exact(r, &mut tag)?;
    if &tag != magic {
        return Err(Error::Format(format!(
            "expected tag {:?}, found {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(&tag)
        )));
    }
    let version = read_u8(r)?;
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format version {version}")));
    }
    Ok(())
}

pub fn write_u8<W: Write>(w: &mut W, v: u8) -> Result<()> {
    w.write_all(&[v])?;
    Ok(())
}

pub fn write_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

pub fn read_u8<R: Read>(r: &mut R) -> Result<u8> {
    let mut b = [0u8; 1];
    read_exact(r, &mut b)?;
    Ok(b[0])
}

pub fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_usize<R: Read>(r: &mut R) -> Result<usize> {
    let v = read_u64(r)?;
    usize::try_from(v).map_err(|_| Error::Format(format!("length {v} exceeds address space")))
}

/// `read_exact` with truncation reported as a format error.
pub fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::Format("truncated input".into()),
        _ => Error::Io(e),
    })
}

/// Writes a scalar field as its own leaf in the size tree.
pub fn write_u64_node<W: Write>(w: &mut CountingWriter<W>, name: &str, v: u64) -> Result<SizeTree> {
    let node = NodeBuilder::open(name, w);
    write_u64(w, v)?;
    Ok(node.close(w))
}
