//! The result document: a versioned header, one line per canonical cone,
//! sorted ray lines, optional maximal-cone counts. Serialization is
//! canonical, so equal results are byte-identical regardless of worker
//! count or emission order. Also holds the temporary-file sink that
//! streams cones to disk during enumeration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Seek, Write as _};
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;

use crate::enumeration::{ConeSink, OutputCone};
use crate::kernel::{ConstraintSystem, IntVector};
use crate::postprocess::{PrevarietyResult, RunMeta};
use crate::{Error, Result};

/// One serialized closed cone: its dimension and canonical rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeLine {
    pub dim: usize,
    pub equations: Vec<IntVector>,
    pub inequalities: Vec<IntVector>,
}

/// The whole result document in memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub meta: RunMeta,
    pub cones: Vec<ConeLine>,
    pub rays: Vec<IntVector>,
    pub maximal: Option<BTreeMap<usize, usize>>,
}

impl Document {
    pub fn of(result: &PrevarietyResult) -> Document {
        Document {
            meta: result.meta.clone(),
            cones: result
                .cones
                .iter()
                .map(|c| ConeLine {
                    dim: c.dim(),
                    equations: c.key.equations().to_vec(),
                    inequalities: c.key.nonstrict().to_vec(),
                })
                .collect(),
            rays: result.rays.clone(),
            maximal: result.maximal_by_dim.clone(),
        }
    }
}

fn format_vector(v: &IntVector) -> String {
    let inner = v
        .coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("({inner})")
}

fn format_rows(rows: &[IntVector]) -> String {
    let inner = rows.iter().map(format_vector).collect::<Vec<_>>().join(";");
    format!("{{{inner}}}")
}

pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    let mut line = |s: String| writeln!(out, "{s}").expect("string writes cannot fail");
    line("PREVARIETY v1".to_string());
    line(format!("system: {}", doc.meta.label));
    line(format!("n: {}", doc.meta.dim));
    line(format!("fans: {}", doc.meta.fan_count));
    line(format!("seed: {}", doc.meta.seed));
    line(format!("workers: {}", doc.meta.workers));
    for cone in &doc.cones {
        line(format!(
            "CONE dim={} eq={} ineq={}",
            cone.dim,
            format_rows(&cone.equations),
            format_rows(&cone.inequalities)
        ));
    }
    line(format!("RAYS count={}", doc.rays.len()));
    for ray in &doc.rays {
        line(format!("RAY {}", format_vector(ray)));
    }
    if let Some(maximal) = &doc.maximal {
        for (dim, count) in maximal {
            line(format!("MAXIMAL dim={dim} count={count}"));
        }
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_vector(s: &str, line: usize) -> Result<IntVector> {
    let body = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| parse_err(line, format!("expected a (…) vector, found {s:?}")))?;
    let coords = body
        .split(',')
        .map(|c| {
            BigInt::from_str(c.trim())
                .map_err(|_| parse_err(line, format!("bad integer {c:?} in vector")))
        })
        .collect::<Result<Vec<BigInt>>>()?;
    Ok(IntVector::new(coords))
}

fn parse_rows(s: &str, line: usize) -> Result<Vec<IntVector>> {
    let body = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| parse_err(line, format!("expected a {{…}} row set, found {s:?}")))?;
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(';').map(|r| parse_vector(r, line)).collect()
}

fn header_field<'a>(text: &'a str, key: &str, lineno: usize) -> Result<&'a str> {
    text.strip_prefix(key)
        .and_then(|t| t.strip_prefix(": "))
        .ok_or_else(|| parse_err(lineno, format!("expected `{key}: …`, found {text:?}")))
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {s:?}")))
}

/// Parses a serialized document. Strict: field order, counts, and row
/// formats must match what `serialize` writes.
pub fn parse(text: &str) -> Result<Document> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |expect: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of document, wanted {expect}")))
    };

    let (no, l) = next("the PREVARIETY header")?;
    if l != "PREVARIETY v1" {
        return Err(parse_err(no, format!("unsupported header {l:?}")));
    }
    let (no, l) = next("system")?;
    let label = header_field(l, "system", no)?.to_string();
    let (no, l) = next("n")?;
    let dim = parse_usize(header_field(l, "n", no)?, no, "dimension")?;
    let (no, l) = next("fans")?;
    let fan_count = parse_usize(header_field(l, "fans", no)?, no, "fan count")?;
    let (no, l) = next("seed")?;
    let seed = header_field(l, "seed", no)?
        .parse::<u64>()
        .map_err(|_| parse_err(no, "bad seed"))?;
    let (no, l) = next("workers")?;
    let workers = parse_usize(header_field(l, "workers", no)?, no, "worker count")?;

    let mut cones = Vec::new();
    let (mut no, mut l) = next("CONE or RAYS")?;
    while let Some(rest) = l.strip_prefix("CONE ") {
        let mut parts = rest.splitn(3, ' ');
        let dim_part = parts.next().unwrap_or_default();
        let eq_part = parts.next().unwrap_or_default();
        let ineq_part = parts.next().unwrap_or_default();
        let cone_dim = parse_usize(
            dim_part
                .strip_prefix("dim=")
                .ok_or_else(|| parse_err(no, "CONE line missing dim="))?,
            no,
            "cone dimension",
        )?;
        let equations = parse_rows(
            eq_part
                .strip_prefix("eq=")
                .ok_or_else(|| parse_err(no, "CONE line missing eq="))?,
            no,
        )?;
        let inequalities = parse_rows(
            ineq_part
                .strip_prefix("ineq=")
                .ok_or_else(|| parse_err(no, "CONE line missing ineq="))?,
            no,
        )?;
        cones.push(ConeLine {
            dim: cone_dim,
            equations,
            inequalities,
        });
        (no, l) = next("CONE or RAYS")?;
    }

    let count = parse_usize(
        l.strip_prefix("RAYS count=")
            .ok_or_else(|| parse_err(no, format!("expected `RAYS count=…`, found {l:?}")))?,
        no,
        "ray count",
    )?;
    let mut rays = Vec::with_capacity(count);
    for _ in 0..count {
        let (no, l) = next("a RAY line")?;
        let v = l
            .strip_prefix("RAY ")
            .ok_or_else(|| parse_err(no, format!("expected `RAY (…)`, found {l:?}")))?;
        rays.push(parse_vector(v, no)?);
    }

    let mut maximal: Option<BTreeMap<usize, usize>> = None;
    for (no, l) in lines {
        let rest = l
            .strip_prefix("MAXIMAL dim=")
            .ok_or_else(|| parse_err(no, format!("unexpected trailing line {l:?}")))?;
        let (d, c) = rest
            .split_once(" count=")
            .ok_or_else(|| parse_err(no, "MAXIMAL line missing count="))?;
        let dim = parse_usize(d, no, "maximal dimension")?;
        let count = parse_usize(c, no, "maximal count")?;
        maximal.get_or_insert_with(BTreeMap::new).insert(dim, count);
    }

    Ok(Document {
        meta: RunMeta {
            label,
            dim,
            fan_count,
            seed,
            workers,
        },
        cones,
        rays,
        maximal,
    })
}

/// Streams emitted cones to a temporary file, one line each, so the
/// enumeration does not hold every output in memory. `finish` reads them
/// back as constraint systems for the canonicalization pass.
pub struct FileSink {
    dim: usize,
    writer: Mutex<BufWriter<std::fs::File>>,
    count: std::sync::atomic::AtomicU64,
}

impl FileSink {
    pub fn new(dim: usize) -> std::io::Result<FileSink> {
        let file = tempfile::tempfile()?;
        Ok(FileSink {
            dim,
            writer: Mutex::new(BufWriter::new(file)),
            count: std::sync::atomic::AtomicU64::new(0),
        })
    }

    pub fn count(&self) -> u64 {
        self.count.load(std::sync::atomic::Ordering::SeqCst)
    }

    pub fn finish(self) -> Result<Vec<ConstraintSystem>> {
        let mut writer = self
            .writer
            .into_inner()
            .expect("sink mutex cannot be poisoned");
        writer.flush()?;
        let mut file = writer
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        file.rewind()?;
        let reader = BufReader::new(file);
        let mut systems = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let mut parts = line.splitn(3, ' ');
            let eq = parse_rows(
                parts
                    .next()
                    .and_then(|p| p.strip_prefix("eq="))
                    .ok_or_else(|| parse_err(i + 1, "stream line missing eq="))?,
                i + 1,
            )?;
            let ns = parse_rows(
                parts
                    .next()
                    .and_then(|p| p.strip_prefix("ineq="))
                    .ok_or_else(|| parse_err(i + 1, "stream line missing ineq="))?,
                i + 1,
            )?;
            let st = parse_rows(
                parts
                    .next()
                    .and_then(|p| p.strip_prefix("strict="))
                    .ok_or_else(|| parse_err(i + 1, "stream line missing strict="))?,
                i + 1,
            )?;
            systems.push(ConstraintSystem::from_parts(self.dim, eq, ns, st)?);
        }
        Ok(systems)
    }
}

impl ConeSink for FileSink {
    fn emit(&self, cone: OutputCone) {
        let body = cone.cone.body();
        let line = format!(
            "eq={} ineq={} strict={}\n",
            format_rows(body.equations()),
            format_rows(body.nonstrict()),
            format_rows(body.strict())
        );
        self.writer
            .lock()
            .expect("sink mutex cannot be poisoned")
            .write_all(line.as_bytes())
            .expect("temporary stream write failed");
        self.count.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
    }
}
