//! CSV sample dumps.

use std::io::Write;

use meanbound_core::{Inputs, Verdict};
use serde::Serialize;

use crate::error::Error;
use crate::sweep::SampleDump;

#[derive(Serialize)]
struct Row<'a> {
    id: &'a str,
    sample_index: u64,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    n: Option<u64>,
    /// Ky Fan values joined with `;`.
    values: Option<String>,
    margin: f64,
    verdict: Verdict,
}

impl<'a> Row<'a> {
    fn new(id: &'a str, sample_index: u64, inputs: &Inputs, margin: f64, verdict: Verdict) -> Self {
        let mut row = Row {
            id,
            sample_index,
            a: None,
            b: None,
            c: None,
            d: None,
            p: None,
            q: None,
            n: None,
            values: None,
            margin,
            verdict,
        };
        match *inputs {
            Inputs::Pair { a, b } => (row.a, row.b) = (Some(a), Some(b)),
            Inputs::Quad { a, b, c, d } => (row.a, row.b, row.c, row.d) = (Some(a), Some(b), Some(c), Some(d)),
            Inputs::QuadExponents { a, b, c, d, p, q } => {
                (row.a, row.b, row.c, row.d, row.p, row.q) = (Some(a), Some(b), Some(c), Some(d), Some(p), Some(q))
            }
            Inputs::Index { n } => row.n = Some(n),
            Inputs::Sample { ref values } => {
                row.values = Some(values.iter().map(f64::to_string).collect::<Vec<_>>().join(";"))
            }
        }
        row
    }
}

/// Writes one row per evaluated sample, ids in sweep order and samples in
/// index order.
pub fn write_csv<W: Write>(dump: &SampleDump, out: W) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    for (id, records) in dump {
        for r in records {
            w.serialize(Row::new(id.name(), r.index, &r.inputs, r.margin, r.verdict)).map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep_with_dump, SweepConfig, SweepId};

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let cfg = SweepConfig {
            ids: SweepId::parse_list("EQ4,EQ15,EQ21").unwrap(),
            samples: 5,
            record_samples: true,
            ..SweepConfig::default()
        };
        let (_, dump) = run_sweep_with_dump(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&dump, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "id,sample_index,a,b,c,d,p,q,n,values,margin,verdict");
        assert_eq!(lines.len(), 16);
        assert!(lines[1].starts_with("EQ4,0,"));
        assert!(lines[15].starts_with("EQ21,4,,,,,,,,"));
    }
}
