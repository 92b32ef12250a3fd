//! JSON-lines persistence for [`EventLogPath`].
//!
//! ```text
//! {"type":"header","n":N,"horizon":H,"model":"edge-flip","params":{..},"seed":S}
//! {"type":"init","edges":[[i,j],...]}
//! {"type":"ev","t":0.0123,"i":1,"j":5,"v":1}
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a file and
//! writing it back reproduces it byte for byte.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AdjacencyGraph;
use crate::process::{EdgeEvent, EventLogPath, ModelMeta};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Header {
        n: usize,
        horizon: f64,
        model: String,
        params: serde_json::Value,
        seed: u64,
    },
    Init {
        edges: Vec<[usize; 2]>,
    },
    Ev {
        t: f64,
        i: usize,
        j: usize,
        v: u8,
    },
}

pub fn write_path<W: Write>(path: &EventLogPath, mut out: W) -> Result<()> {
    let meta = path.meta();
    let records = [
        Record::Header {
            n: path.n_vertices(),
            horizon: path.horizon(),
            model: meta.model.clone(),
            params: meta.params.clone(),
            seed: meta.seed,
        },
        Record::Init {
            edges: path.initial().edges().map(|(i, j)| [i, j]).collect(),
        },
    ];
    let io = |e| Error::io("<writer>", e);
    for r in &records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(io)?;
    }
    for e in path.events() {
        serde_json::to_writer(
            &mut out,
            &Record::Ev {
                t: e.time,
                i: e.i,
                j: e.j,
                v: u8::from(e.value),
            },
        )?;
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn to_jsonl_string(path: &EventLogPath) -> String {
    let mut buf = Vec::new();
    write_path(path, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Reads a path; errors carry the 1-based line number of the bad record.
pub fn read_path<R: BufRead>(input: R) -> Result<EventLogPath> {
    let mut header = None;
    let mut initial = None;
    let mut events = Vec::new();
    let mut last_line = 0;
    for (k, line) in input.lines().enumerate() {
        let ln = k + 1;
        last_line = ln;
        let line = line.map_err(|e| Error::parse(ln, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(&line).map_err(|e| Error::parse(ln, e.to_string()))?;
        match record {
            Record::Header {
                n,
                horizon,
                model,
                params,
                seed,
            } => {
                if header.is_some() {
                    return Err(Error::parse(ln, "second header record"));
                }
                header = Some((
                    n,
                    horizon,
                    ModelMeta {
                        model,
                        params,
                        seed,
                    },
                ));
            }
            Record::Init { edges } => {
                let (n, ..) = header
                    .as_ref()
                    .ok_or_else(|| Error::parse(ln, "init record before header"))?;
                if initial.is_some() {
                    return Err(Error::parse(ln, "second init record"));
                }
                let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
                if let Some(bad) = pairs.iter().find(|(i, j)| i >= j) {
                    return Err(Error::parse(
                        ln,
                        format!("edge {bad:?} is not ordered i < j"),
                    ));
                }
                let g = AdjacencyGraph::from_edges(*n, &pairs)
                    .map_err(|e| Error::parse(ln, e.to_string()))?;
                if g.edge_count() != pairs.len() {
                    return Err(Error::parse(ln, "duplicate edge in init record"));
                }
                initial = Some(g);
            }
            Record::Ev { t, i, j, v } => {
                if initial.is_none() {
                    return Err(Error::parse(ln, "event before init record"));
                }
                let value = match v {
                    0 => false,
                    1 => true,
                    _ => return Err(Error::parse(ln, format!("event value {v} is not 0 or 1"))),
                };
                let ev = EdgeEvent {
                    time: t,
                    i,
                    j,
                    value,
                };
                // Validate incrementally so the error points at the offending line.
                let (n, horizon, _) = header.as_ref().expect("checked above");
                if !(t > 0.0 && t <= *horizon) || !(1 <= i && i < j && j <= *n) {
                    return Err(Error::parse(ln, format!("invalid event {ev:?}")));
                }
                if let Some(prev) = events.last() {
                    let prev: &EdgeEvent = prev;
                    let ordered = prev.time < t || (prev.time == t && (prev.i, prev.j) < (i, j));
                    if !ordered {
                        return Err(Error::parse(ln, "events out of (time, i, j) order"));
                    }
                }
                events.push(ev);
            }
        }
    }
    let (_, horizon, meta) =
        header.ok_or_else(|| Error::parse(last_line.max(1), "missing header record"))?;
    let initial = initial.ok_or_else(|| Error::parse(last_line.max(1), "missing init record"))?;
    EventLogPath::new(horizon, initial, events, meta)
        .map_err(|e| Error::parse(last_line.max(1), e.to_string()))
}

pub fn save(path: &EventLogPath, file: &Path) -> Result<()> {
    let f = File::create(file).map_err(|e| Error::io(file, e))?;
    write_path(path, BufWriter::new(f)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(file, source),
        other => other,
    })
}

pub fn load(file: &Path) -> Result<EventLogPath> {
    let f = File::open(file).map_err(|e| Error::io(file, e))?;
    read_path(BufReader::new(f))
}
