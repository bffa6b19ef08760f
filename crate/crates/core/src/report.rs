//! CSV serialization of curves, estimates and warnings.
//!
//! Floats are written with the shortest representation that parses back to
//! the same value, always in plain decimal notation. Rows end in `\n`.

use crate::error::{Result, StereoError};
use crate::pipeline::{FrameEstimate, WarningEvent};
use crate::ranging::{ErrorSample, SampleValue};
use serde::Deserialize;
use std::io::{Read, Write};

pub const ESTIMATES_HEADER: [&str; 5] = ["t_s", "target_index", "disparity_px", "range_m", "true_range_m"];
pub const WARNINGS_HEADER: [&str; 4] = ["t_s", "target_index", "closing_speed_mps", "ttc_s"];

const DIVERGENT: &str = "divergent";
const UNMEASURABLE: &str = "unmeasurable";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Range against disparity.
    Fig1,
    /// Misalignment error against yaw, per baseline.
    Fig2,
    /// Size-dependent error against range, per target width.
    Fig3,
}

impl CurveKind {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            CurveKind::Fig1 => &["disparity_px", "range_m"],
            CurveKind::Fig2 => &["misalign_deg", "baseline_m", "rel_error"],
            CurveKind::Fig3 => &["range_m", "target_width_m", "rel_error"],
        }
    }
}

/// One parsed curve row; `group_key` is absent for single-curve files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub abscissa: f64,
    pub group_key: Option<f64>,
    pub value: SampleValue,
}

impl From<&ErrorSample> for CurveRow {
    fn from(s: &ErrorSample) -> Self {
        CurveRow { abscissa: s.abscissa, group_key: Some(s.group_key), value: s.value }
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn value_field(v: SampleValue) -> String {
    match v {
        SampleValue::Value(x) => x.to_string(),
        SampleValue::Divergent => DIVERGENT.to_string(),
        SampleValue::Unmeasurable => UNMEASURABLE.to_string(),
    }
}

pub fn write_curve<W: Write>(kind: CurveKind, samples: &[ErrorSample], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(kind.header())?;
    for s in samples {
        match kind {
            CurveKind::Fig1 => {
                w.write_record([format!("{}", s.abscissa as i64), value_field(s.value)])?;
            }
            CurveKind::Fig2 | CurveKind::Fig3 => {
                w.write_record([s.abscissa.to_string(), s.group_key.to_string(), value_field(s.value)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(field: &str) -> Result<f64> {
    field.parse().map_err(|_| StereoError::invalid(format!("not a number: {field:?}")))
}

fn parse_value(field: &str) -> Result<SampleValue> {
    match field {
        DIVERGENT => Ok(SampleValue::Divergent),
        UNMEASURABLE => Ok(SampleValue::Unmeasurable),
        other => parse_f64(other).map(SampleValue::Value),
    }
}

pub fn read_curve<R: Read>(kind: CurveKind, input: R) -> Result<Vec<CurveRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != kind.header() {
        return Err(StereoError::invalid(format!("unexpected curve header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = match kind {
            CurveKind::Fig1 => {
                CurveRow { abscissa: parse_f64(&rec[0])?, group_key: None, value: parse_value(&rec[1])? }
            }
            CurveKind::Fig2 | CurveKind::Fig3 => CurveRow {
                abscissa: parse_f64(&rec[0])?,
                group_key: Some(parse_f64(&rec[1])?),
                value: parse_value(&rec[2])?,
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_estimates<W: Write>(estimates: &[FrameEstimate], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(ESTIMATES_HEADER)?;
    for e in estimates {
        w.write_record([
            e.t_s.to_string(),
            e.target_index.to_string(),
            e.disparity_px.to_string(),
            e.range_m.to_string(),
            e.true_range_m.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_warnings<W: Write>(events: &[WarningEvent], out: W) -> Result<()> {
    let mut w = writer(out);
    w.write_record(WARNINGS_HEADER)?;
    for e in events {
        w.write_record([
            e.t_s.to_string(),
            e.target_index.to_string(),
            e.closing_speed_mps.to_string(),
            e.ttc_s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct EstimateRow {
    t_s: f64,
    target_index: usize,
    disparity_px: i64,
    range_m: f64,
    true_range_m: f64,
}

#[derive(Deserialize)]
struct WarningRow {
    t_s: f64,
    target_index: usize,
    closing_speed_mps: f64,
    ttc_s: f64,
}

fn check_header<R: Read>(r: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != expected {
        return Err(StereoError::invalid(format!("unexpected header {header:?}")));
    }
    Ok(())
}

pub fn read_estimates<R: Read>(input: R) -> Result<Vec<FrameEstimate>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &ESTIMATES_HEADER)?;
    r.deserialize::<EstimateRow>()
        .map(|row| {
            let row = row?;
            Ok(FrameEstimate {
                t_s: row.t_s,
                target_index: row.target_index,
                disparity_px: row.disparity_px,
                range_m: row.range_m,
                true_range_m: row.true_range_m,
            })
        })
        .collect()
}

pub fn read_warnings<R: Read>(input: R) -> Result<Vec<WarningEvent>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(&mut r, &WARNINGS_HEADER)?;
    r.deserialize::<WarningRow>()
        .map(|row| {
            let row = row?;
            Ok(WarningEvent {
                t_s: row.t_s,
                target_index: row.target_index,
                closing_speed_mps: row.closing_speed_mps,
                ttc_s: row.ttc_s,
            })
        })
        .collect()
}
