//! A small versioned binary container: magic header, format version, and
//! named byte sections. Model files, lexicons, and prior tables all live
//! in this envelope.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"HRKT";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic header (not a toolkit container)")]
    BadMagic,
    #[error("unsupported container version {found} (supported: {supported})")]
    UnsupportedVersion { found: u32, supported: u32 },
    #[error("container is truncated")]
    Truncated,
    #[error("missing section {0:?}")]
    MissingSection(String),
    #[error("malformed section {name:?}: {detail}")]
    MalformedSection { name: String, detail: String },
}

/// An ordered set of named byte sections under a magic header.
#[derive(Debug, Clone, Default)]
pub struct Container {
    sections: Vec<(String, Vec<u8>)>,
}

impl Container {
    pub fn new() -> Container {
        Container::default()
    }

    pub fn add(&mut self, name: &str, payload: Vec<u8>) {
        self.sections.push((name.to_string(), payload));
    }

    pub fn add_json<T: serde::Serialize>(&mut self, name: &str, value: &T) {
        let payload = serde_json::to_vec(value).expect("serializable section");
        self.add(name, payload);
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p.as_slice())
    }

    pub fn require(&self, name: &str) -> Result<&[u8], ContainerError> {
        self.get(name)
            .ok_or_else(|| ContainerError::MissingSection(name.to_string()))
    }

    pub fn require_json<T: serde::de::DeserializeOwned>(
        &self,
        name: &str,
    ) -> Result<T, ContainerError> {
        serde_json::from_slice(self.require(name)?).map_err(|e| {
            ContainerError::MalformedSection {
                name: name.to_string(),
                detail: e.to_string(),
            }
        })
    }

    pub fn section_names(&self) -> Vec<&str> {
        self.sections.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.sections.len() as u32).to_le_bytes())?;
        for (name, payload) in &self.sections {
            let name_bytes = name.as_bytes();
            w.write_all(&(name_bytes.len() as u16).to_le_bytes())?;
            w.write_all(name_bytes)?;
            w.write_all(&(payload.len() as u64).to_le_bytes())?;
            w.write_all(payload)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Container, ContainerError> {
        let mut magic = [0u8; 4];
        read_exact(&mut r, &mut magic)?;
        if &magic != MAGIC {
            return Err(ContainerError::BadMagic);
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(ContainerError::UnsupportedVersion {
                found: version,
                supported: FORMAT_VERSION,
            });
        }
        let count = read_u32(&mut r)? as usize;
        let mut sections = Vec::with_capacity(count);
        for _ in 0..count {
            let name_len = read_u16(&mut r)? as usize;
            let mut name = vec![0u8; name_len];
            read_exact(&mut r, &mut name)?;
            let name = String::from_utf8(name).map_err(|_| ContainerError::Truncated)?;
            let payload_len = read_u64(&mut r)? as usize;
            let mut payload = vec![0u8; payload_len];
            read_exact(&mut r, &mut payload)?;
            sections.push((name, payload));
        }
        Ok(Container { sections })
    }

    /// Serializes to a file via a temp path and an atomic rename.
    pub fn save(&self, path: &Path) -> Result<(), ContainerError> {
        let mut bytes = Vec::new();
        self.write_to(&mut bytes)?;
        atomic_write(path, &bytes)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Container, ContainerError> {
        let bytes = fs::read(path)?;
        Container::read_from(bytes.as_slice())
    }
}

/// Writes bytes to `path.tmp` and renames over the target, so interrupted
/// runs never leave partial outputs at the destination.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<(), ContainerError> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            ContainerError::Truncated
        } else {
            ContainerError::Io(e)
        }
    })
}

fn read_u16<R: Read>(r: &mut R) -> Result<u16, ContainerError> {
    let mut b = [0u8; 2];
    read_exact(r, &mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, ContainerError> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, ContainerError> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Container::new();
        c.add("meta", b"{}".to_vec());
        c.add("tensor.0", vec![1, 2, 3, 4]);
        let mut bytes = Vec::new();
        c.write_to(&mut bytes).unwrap();
        let back = Container::read_from(bytes.as_slice()).unwrap();
        assert_eq!(back.get("meta"), Some(b"{}".as_slice()));
        assert_eq!(back.get("tensor.0"), Some([1u8, 2, 3, 4].as_slice()));
        assert_eq!(back.section_names(), vec!["meta", "tensor.0"]);
    }

    #[test]
    fn bad_magic_rejected() {
        let bytes = b"NOPE\x01\x00\x00\x00\x00\x00\x00\x00";
        assert!(matches!(
            Container::read_from(bytes.as_slice()),
            Err(ContainerError::BadMagic)
        ));
    }

    #[test]
    fn truncation_detected() {
        let mut c = Container::new();
        c.add("x", vec![9; 100]);
        let mut bytes = Vec::new();
        c.write_to(&mut bytes).unwrap();
        bytes.truncate(bytes.len() - 10);
        assert!(matches!(
            Container::read_from(bytes.as_slice()),
            Err(ContainerError::Truncated)
        ));
    }

    #[test]
    fn serialization_is_deterministic() {
        let mut c = Container::new();
        c.add_json("meta", &serde_json::json!({"b": 1, "a": 2}));
        let mut one = Vec::new();
        c.write_to(&mut one).unwrap();
        let mut two = Vec::new();
        c.write_to(&mut two).unwrap();
        assert_eq!(one, two);
    }
}
