//! Descriptor records, Canberra distance, and CSV / JSON-lines persistence.
//!
//! Both formats carry the keys `graph_id,method,b,seed,n,m,v0..v{d-1}`.
//! Values are written in shortest round-trip form, so a save/load cycle is
//! bit-exact. Collections are kept sorted by `graph_id`.

use std::fmt;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::gabe::GABE_DIM;
use crate::maeve::MAEVE_DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Gabe,
    Maeve,
}

impl Method {
    pub fn dim(self) -> usize {
        match self {
            Method::Gabe => GABE_DIM,
            Method::Maeve => MAEVE_DIM,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Gabe => "gabe",
            Method::Maeve => "maeve",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gabe" => Ok(Method::Gabe),
            "maeve" => Ok(Method::Maeve),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// A graph descriptor with its provenance. `budget` is 0 for exact
/// (oracle-derived) descriptors.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    pub graph_id: u64,
    pub method: Method,
    pub budget: u64,
    pub seed: u64,
    pub n: u64,
    pub m: u64,
    pub values: Vec<f64>,
}

/// `Σ |x_i - y_i| / (|x_i| + |y_i|)`, with `0/0` terms contributing 0.
pub fn canberra(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let den = a.abs() + b.abs();
            if den == 0.0 {
                0.0
            } else {
                (a - b).abs() / den
            }
        })
        .sum())
}

pub fn descriptor_distance(a: &Descriptor, b: &Descriptor) -> Result<f64> {
    if a.method != b.method {
        return Err(Error::MethodMismatch(
            a.method.to_string(),
            b.method.to_string(),
        ));
    }
    canberra(&a.values, &b.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" | "ndjson" => Ok(Format::Jsonl),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

impl Format {
    /// Guesses from the file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") | Some("json") => Format::Jsonl,
            _ => Format::Csv,
        }
    }
}

const META_KEYS: [&str; 6] = ["graph_id", "method", "b", "seed", "n", "m"];

fn header(dim: usize) -> Vec<String> {
    META_KEYS
        .iter()
        .map(|s| s.to_string())
        .chain((0..dim).map(|i| format!("v{i}")))
        .collect()
}

fn sorted(descs: &[Descriptor]) -> Vec<&Descriptor> {
    let mut v: Vec<&Descriptor> = descs.iter().collect();
    v.sort_by_key(|d| d.graph_id);
    v
}

pub fn write_descriptors<W: Write>(
    out: W,
    method: Method,
    descs: &[Descriptor],
    format: Format,
) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<output>", e);
    for d in descs {
        if d.method != method {
            return Err(Error::MethodMismatch(
                method.to_string(),
                d.method.to_string(),
            ));
        }
        if d.values.len() != method.dim() {
            return Err(Error::LengthMismatch(d.values.len(), method.dim()));
        }
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::io("<output>", e.into());
            w.write_record(header(method.dim())).map_err(csv_err)?;
            for d in sorted(descs) {
                let mut row = vec![
                    d.graph_id.to_string(),
                    d.method.to_string(),
                    d.budget.to_string(),
                    d.seed.to_string(),
                    d.n.to_string(),
                    d.m.to_string(),
                ];
                row.extend(d.values.iter().map(|v| v.to_string()));
                w.write_record(&row).map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Jsonl => {
            let mut w = BufWriter::new(out);
            for d in sorted(descs) {
                let mut obj = Map::new();
                obj.insert("graph_id".into(), d.graph_id.into());
                obj.insert("method".into(), d.method.as_str().into());
                obj.insert("b".into(), d.budget.into());
                obj.insert("seed".into(), d.seed.into());
                obj.insert("n".into(), d.n.into());
                obj.insert("m".into(), d.m.into());
                for (i, &v) in d.values.iter().enumerate() {
                    let num = serde_json::Number::from_f64(v).ok_or_else(|| {
                        Error::InvalidArgument(format!("non-finite value in graph {}", d.graph_id))
                    })?;
                    obj.insert(format!("v{i}"), Value::Number(num));
                }
                serde_json::to_writer(&mut w, &Value::Object(obj))
                    .map_err(|e| Error::io("<output>", e.into()))?;
                w.write_all(b"\n").map_err(io)?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

pub fn save_descriptors(
    path: &Path,
    method: Method,
    descs: &[Descriptor],
    format: Format,
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_descriptors(file, method, descs, format).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

fn parse_num<T: FromStr>(origin: &Path, line: u64, key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse::<T>()
        .map_err(|_| Error::parse(origin, line, format!("invalid {key} value {raw:?}")))
}

/// Checks a single method across rows and enforces its dimension.
fn check_row(origin: &Path, line: u64, seen: &mut Option<Method>, d: &Descriptor) -> Result<()> {
    match seen {
        Some(m) if *m != d.method => {
            return Err(Error::parse(
                origin,
                line,
                format!("mixed methods in one file: {m} and {}", d.method),
            ))
        }
        _ => *seen = Some(d.method),
    }
    if d.values.len() != d.method.dim() {
        return Err(Error::parse(
            origin,
            line,
            format!(
                "{} descriptor needs {} values, found {}",
                d.method,
                d.method.dim(),
                d.values.len()
            ),
        ));
    }
    Ok(())
}

pub fn read_descriptors<R: BufRead>(
    input: R,
    format: Format,
    origin: &Path,
) -> Result<Vec<Descriptor>> {
    let mut out = Vec::new();
    let mut seen = None;
    match format {
        Format::Csv => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(true)
                .trim(csv::Trim::All)
                .from_reader(input);
            let head = rdr
                .headers()
                .map_err(|e| Error::parse(origin, 1, e.to_string()))?
                .clone();
            if head.len() < META_KEYS.len()
                || head.iter().zip(META_KEYS).any(|(h, k)| h != k)
                || head
                    .iter()
                    .skip(META_KEYS.len())
                    .enumerate()
                    .any(|(i, h)| h != format!("v{i}"))
            {
                return Err(Error::parse(origin, 1, "unexpected header"));
            }
            for rec in rdr.records() {
                let rec = rec.map_err(|e| {
                    let line = e.position().map_or(0, |p| p.line());
                    Error::parse(origin, line, e.to_string())
                })?;
                let line = rec.position().map_or(0, |p| p.line());
                let d = Descriptor {
                    graph_id: parse_num(origin, line, "graph_id", &rec[0])?,
                    method: rec[1]
                        .parse()
                        .map_err(|e: Error| Error::parse(origin, line, e.to_string()))?,
                    budget: parse_num(origin, line, "b", &rec[2])?,
                    seed: parse_num(origin, line, "seed", &rec[3])?,
                    n: parse_num(origin, line, "n", &rec[4])?,
                    m: parse_num(origin, line, "m", &rec[5])?,
                    values: rec
                        .iter()
                        .skip(META_KEYS.len())
                        .map(|v| parse_num::<f64>(origin, line, "value", v))
                        .collect::<Result<_>>()?,
                };
                check_row(origin, line, &mut seen, &d)?;
                out.push(d);
            }
        }
        Format::Jsonl => {
            for (idx, text) in input.lines().enumerate() {
                let line = idx as u64 + 1;
                let text = text.map_err(|e| Error::io(origin, e))?;
                if text.trim().is_empty() {
                    continue;
                }
                let d = parse_json_row(&text).map_err(|msg| Error::parse(origin, line, msg))?;
                check_row(origin, line, &mut seen, &d)?;
                out.push(d);
            }
        }
    }
    out.sort_by_key(|d| d.graph_id);
    Ok(out)
}

fn parse_json_row(text: &str) -> std::result::Result<Descriptor, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let obj = value.as_object().ok_or("expected a JSON object")?;
    let uint = |k: &str| {
        obj.get(k)
            .and_then(Value::as_u64)
            .ok_or_else(|| format!("missing or invalid {k:?}"))
    };
    let method: Method = obj
        .get("method")
        .and_then(Value::as_str)
        .ok_or("missing \"method\"")?
        .parse()
        .map_err(|e: Error| e.to_string())?;
    let mut values = Vec::with_capacity(method.dim());
    for i in 0.. {
        match obj.get(&format!("v{i}")) {
            Some(v) => values.push(v.as_f64().ok_or_else(|| format!("v{i} is not a number"))?),
            None => break,
        }
    }
    if obj.len() != META_KEYS.len() + values.len() {
        return Err("unexpected keys".into());
    }
    Ok(Descriptor {
        graph_id: uint("graph_id")?,
        method,
        budget: uint("b")?,
        seed: uint("seed")?,
        n: uint("n")?,
        m: uint("m")?,
        values,
    })
}

pub fn load_descriptors(path: &Path, format: Format) -> Result<Vec<Descriptor>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_descriptors(BufReader::new(file), format, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canberra_examples() {
        assert_eq!(canberra(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(canberra(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 2.0);
        assert_eq!(canberra(&[3.0, 1.0], &[1.0, 1.0]).unwrap(), 0.5);
        assert_eq!(canberra(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(canberra(&[-1.0], &[1.0]).unwrap(), 1.0);
        assert!(canberra(&[1.0], &[1.0, 2.0]).is_err());
    }

    fn sample(id: u64, method: Method) -> Descriptor {
        Descriptor {
            graph_id: id,
            method,
            budget: 10,
            seed: 3,
            n: 5,
            m: 7,
            values: (0..method.dim())
                .map(|i| (i as f64 + 0.1) / 3.0 - id as f64)
                .collect(),
        }
    }

    #[test]
    fn distance_requires_same_method() {
        assert!(descriptor_distance(&sample(0, Method::Gabe), &sample(1, Method::Maeve)).is_err());
    }

    #[test]
    fn empty_collection_has_header() {
        let mut buf = Vec::new();
        write_descriptors(&mut buf, Method::Gabe, &[], Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("graph_id,method,b,seed,n,m,v0,"));
        assert!(text.trim_end().ends_with("v16"));
        let back = read_descriptors(text.as_bytes(), Format::Csv, Path::new("mem")).unwrap();
        assert!(back.is_empty());
    }

    #[test]
    fn corrupt_rows_name_the_line() {
        let mut buf = Vec::new();
        let descs = [sample(0, Method::Gabe), sample(1, Method::Gabe)];
        write_descriptors(&mut buf, Method::Gabe, &descs, Format::Csv).unwrap();
        let text = String::from_utf8(buf)
            .unwrap()
            .replacen(",gabe,10,", ",gabe,ten,", 2);
        let err = read_descriptors(text.as_bytes(), Format::Csv, Path::new("d.csv")).unwrap_err();
        assert!(err.to_string().starts_with("d.csv:2:"), "{err}");

        let bad = "{\"graph_id\":0}\n";
        let err =
            read_descriptors(bad.as_bytes(), Format::Jsonl, Path::new("d.jsonl")).unwrap_err();
        assert!(err.to_string().starts_with("d.jsonl:1:"), "{err}");
    }

    #[test]
    fn mixed_methods_rejected() {
        let mut a = Vec::new();
        write_descriptors(
            &mut a,
            Method::Gabe,
            &[sample(0, Method::Gabe)],
            Format::Jsonl,
        )
        .unwrap();
        write_descriptors(
            &mut a,
            Method::Maeve,
            &[sample(1, Method::Maeve)],
            Format::Jsonl,
        )
        .unwrap();
        let err = read_descriptors(&a[..], Format::Jsonl, Path::new("x")).unwrap_err();
        assert!(err.to_string().contains("mixed methods"), "{err}");
    }

    #[test]
    fn output_sorted_by_graph_id() {
        let descs = [sample(5, Method::Maeve), sample(2, Method::Maeve)];
        for format in [Format::Csv, Format::Jsonl] {
            let mut buf = Vec::new();
            write_descriptors(&mut buf, Method::Maeve, &descs, format).unwrap();
            let back = read_descriptors(&buf[..], format, Path::new("x")).unwrap();
            assert_eq!(
                back.iter().map(|d| d.graph_id).collect::<Vec<_>>(),
                vec![2, 5]
            );
            assert_eq!(back[1], descs[0]);
        }
    }
}
