//! Binary rule files.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic  b"DBQR"          4 bytes
//! version u32             currently 1
//! n       u32
//! N       u32             resolution of the fine rule
//! region  u32             0 boundary, 1 D, 2 U, 3 U\D
//! record  u32             f64 values per node
//! fine    u64             node counts
//! coarse  u64
//! spacing f64
//! nodes   (fine + coarse) * record f64
//! ```
//!
//! Boundary records are `2n` coordinates then the `2n` flux components; volume records are
//! `2n` coordinates then the weight. Rules with an exclusion depend on the evaluation point and
//! are not written.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::rules::{BoundaryNode, BoundaryRule, Region, VolumeNode, VolumeRule};
use crate::error::{Error, Result};
use crate::geometry::{CPoint, MAX_DIM};

const MAGIC: &[u8; 4] = b"DBQR";
const VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub enum RuleFile {
    Boundary(BoundaryRule),
    Volume(VolumeRule),
}

struct Header {
    n: u32,
    resolution: u32,
    region: u32,
    record: u32,
    fine: u64,
    coarse: u64,
    spacing: f64,
}

fn write_all(path: &Path, h: &Header, data: impl Iterator<Item = f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    for v in [VERSION, h.n, h.resolution, h.region, h.record] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&h.fine.to_le_bytes())?;
    w.write_all(&h.coarse.to_le_bytes())?;
    w.write_all(&h.spacing.to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_boundary_rule(path: &Path, rule: &BoundaryRule) -> Result<()> {
    let n = rule.n();
    let h = Header {
        n: n as u32,
        resolution: rule.resolution() as u32,
        region: 0,
        record: 4 * n as u32,
        fine: rule.fine().len() as u64,
        coarse: rule.coarse().len() as u64,
        spacing: rule.spacing(),
    };
    let data = rule
        .fine()
        .iter()
        .chain(rule.coarse())
        .flat_map(|b| b.zeta.to_reals().into_iter().chain(b.flux[..2 * n].iter().copied()));
    write_all(path, &h, data)
}

pub fn write_volume_rule(path: &Path, rule: &VolumeRule) -> Result<()> {
    if rule.exclusion().is_some() {
        return Err(Error::RuleFile {
            path: path.to_path_buf(),
            reason: "rules with an exclusion are tied to one evaluation point".into(),
        });
    }
    let n = rule.n();
    let h = Header {
        n: n as u32,
        resolution: rule.resolution() as u32,
        region: rule.region().tag(),
        record: 2 * n as u32 + 1,
        fine: rule.fine().len() as u64,
        coarse: rule.coarse().len() as u64,
        spacing: rule.spacing(),
    };
    let data = rule
        .fine()
        .iter()
        .chain(rule.coarse())
        .flat_map(|v| v.zeta.to_reals().into_iter().chain(std::iter::once(v.weight)));
    write_all(path, &h, data)
}

pub fn read_rule(path: &Path) -> Result<RuleFile> {
    let bad = |reason: &str| Error::RuleFile { path: path.to_path_buf(), reason: reason.into() };
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("bad magic"));
    }
    let mut u32s = [0u32; 5];
    for v in u32s.iter_mut() {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)?;
        *v = u32::from_le_bytes(b);
    }
    let [version, n, resolution, region, record] = u32s;
    if version != VERSION {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let n = n as usize;
    if !(1..=MAX_DIM).contains(&n) {
        return Err(bad(&format!("dimension {n} out of range")));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let fine = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let coarse = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let spacing = f64::from_le_bytes(b8);
    let record = record as usize;
    let expected = if region == 0 { 4 * n } else { 2 * n + 1 };
    if record != expected {
        return Err(bad(&format!("record length {record}, expected {expected}")));
    }
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    if data.len() != (fine + coarse) * record * 8 {
        return Err(bad("truncated node data"));
    }
    let vals: Vec<f64> = data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let records: Vec<&[f64]> = vals.chunks_exact(record).collect();
    let resolution = resolution as usize;
    if region == 0 {
        let node = |rec: &&[f64]| {
            let mut flux = [0.0; 2 * MAX_DIM];
            flux[..2 * n].copy_from_slice(&rec[2 * n..]);
            BoundaryNode { zeta: CPoint::from_reals(&rec[..2 * n]), flux }
        };
        let f = records[..fine].iter().map(node).collect();
        let c = records[fine..].iter().map(node).collect();
        Ok(RuleFile::Boundary(BoundaryRule::from_parts(n, resolution, f, c, spacing)))
    } else {
        let region = Region::from_tag(region).ok_or_else(|| bad(&format!("unknown region tag {region}")))?;
        let node = |rec: &&[f64]| VolumeNode { zeta: CPoint::from_reals(&rec[..2 * n]), weight: rec[2 * n] };
        let f = records[..fine].iter().map(node).collect();
        let c = records[fine..].iter().map(node).collect();
        Ok(RuleFile::Volume(VolumeRule::from_parts(n, resolution, region, f, c, spacing)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, DomainSpec};

    #[test]
    fn round_trip() {
        let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let b = BoundaryRule::build(&dom, 8).unwrap();
        let p = dir.path().join("b.rule");
        write_boundary_rule(&p, &b).unwrap();
        match read_rule(&p).unwrap() {
            RuleFile::Boundary(r) => {
                assert_eq!(r.fine(), b.fine());
                assert_eq!(r.coarse(), b.coarse());
            }
            _ => panic!("wrong kind"),
        }
        let v = VolumeRule::build(&dom, Region::UMinusD, 8, None).unwrap();
        let p = dir.path().join("v.rule");
        write_volume_rule(&p, &v).unwrap();
        match read_rule(&p).unwrap() {
            RuleFile::Volume(r) => {
                assert_eq!(r.fine(), v.fine());
                assert_eq!(r.region(), Region::UMinusD);
            }
            _ => panic!("wrong kind"),
        }
        std::fs::write(&p, b"nope").unwrap();
        assert!(read_rule(&p).is_err());
    }
}
