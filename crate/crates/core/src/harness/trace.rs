//! CSV convergence traces.
//!
//! Columns: `n, fp_residual, r_residual, scaled_residual, km_gap, y_0, ..`.
//! `km_gap` is empty when no reference fixed point was supplied and the `y_i`
//! columns appear only when shadows were recorded. Floats carry 17
//! significant digits so every row reads back to the same `f64`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::solver::IterationRecord;

const FIXED_COLUMNS: [&str; 5] = ["n", "fp_residual", "r_residual", "scaled_residual", "km_gap"];

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace<W: Write>(writer: W, records: &[IterationRecord]) -> Result<()> {
    let shadow_dim = records.iter().find_map(|r| r.shadow.as_ref().map(Point::dim));
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((0..shadow_dim.unwrap_or(0)).map(|i| format!("y_{i}")));
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.n.to_string(),
            format_float(r.fp_residual),
            format_float(r.r_residual),
            format_float(r.scaled_residual),
            r.km_gap.map(format_float).unwrap_or_default(),
        ];
        if let Some(d) = shadow_dim {
            match &r.shadow {
                Some(y) => row.extend(y.coords().iter().map(|&c| format_float(c))),
                None => row.extend(std::iter::repeat_n(String::new(), d)),
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn bad_row(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: "<trace>".into(), message: format!("row {line}: {}", msg.into()) }
}

pub fn read_trace<R: Read>(reader: R) -> Result<Vec<IterationRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.len() < FIXED_COLUMNS.len()
        || header.iter().zip(FIXED_COLUMNS).any(|(h, expect)| h != expect)
    {
        return Err(bad_row(0, "unexpected trace header"));
    }
    let shadow_dim = header.len() - FIXED_COLUMNS.len();
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let f = |k: usize| -> Result<f64> {
            row[k].parse::<f64>().map_err(|_| bad_row(i + 1, format!("bad number {:?}", &row[k])))
        };
        let n = row[0].parse::<usize>().map_err(|_| bad_row(i + 1, "bad iteration index"))?;
        let km_gap = if row[4].is_empty() { None } else { Some(f(4)?) };
        let shadow = if shadow_dim > 0 && !row[5].is_empty() {
            let c = (5..5 + shadow_dim).map(f).collect::<Result<Vec<_>>>()?;
            Some(Point::from_vec(c))
        } else {
            None
        };
        out.push(IterationRecord {
            n,
            fp_residual: f(1)?,
            r_residual: f(2)?,
            scaled_residual: f(3)?,
            km_gap,
            shadow,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(n: usize, v: f64, gap: Option<f64>, y: Option<Vec<f64>>) -> IterationRecord {
        IterationRecord {
            n,
            fp_residual: v,
            r_residual: v * 0.5,
            scaled_residual: v * (n as f64).sqrt(),
            km_gap: gap,
            shadow: y.map(Point::from_vec),
        }
    }

    #[test]
    fn header_and_row_count() {
        let recs = vec![record(0, 1.0, None, Some(vec![1.0, 2.0])), record(1, 0.5, None, Some(vec![0.0, 0.0]))];
        let mut buf = Vec::new();
        write_trace(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), recs.len() + 1);
        assert_eq!(lines[0], "n,fp_residual,r_residual,scaled_residual,km_gap,y_0,y_1");
        assert!(lines[1].starts_with("0,1.0000000000000000e0,5.0000000000000000e-1,0.0000000000000000e0,,"));
    }

    #[test]
    fn no_shadow_columns_without_shadows() {
        let mut buf = Vec::new();
        write_trace(&mut buf, &[record(0, 1.0, Some(0.0), None)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "n,fp_residual,r_residual,scaled_residual,km_gap");
    }

    proptest! {
        #[test]
        fn rows_read_back_exactly(
            vals in prop::collection::vec((0.0f64..1e6, prop::option::of(-1e3f64..1e3), -1e9f64..1e9, -1e-9f64..1e-9), 1..20)
        ) {
            let recs: Vec<IterationRecord> = vals
                .iter()
                .enumerate()
                .map(|(n, &(v, g, y0, y1))| record(n, v, g, Some(vec![y0, y1])))
                .collect();
            let mut buf = Vec::new();
            write_trace(&mut buf, &recs).unwrap();
            let back = read_trace(buf.as_slice()).unwrap();
            prop_assert_eq!(back, recs);
        }
    }
}
