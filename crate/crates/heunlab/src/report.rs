//! Result documents (JSON) and term traces (CSV).

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::AppError;
use crate::instance::InstanceFile;

pub const TOOL: &str = "heunlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed trace columns.
pub const TRACE_COLUMNS: [&str; 6] = ["n", "value_re", "value_im", "log_mag", "term_at_r", "partial_sum"];

/// One CSV row, already rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub n: usize,
    pub value_re: String,
    pub value_im: String,
    pub log_mag: String,
    pub term_at_r: String,
    pub partial_sum: String,
}

/// `ln |value|` as written to traces; zero values carry `-inf`.
pub fn render_log(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:e}"),
        None => "-inf".into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    /// File-name suffix, e.g. `boundary`.
    pub name: &'static str,
    pub rows: Vec<TraceLine>,
}

impl Trace {
    pub fn to_csv(&self) -> Result<Vec<u8>, AppError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| AppError::Input(format!("csv: {e}"));
        w.write_record(TRACE_COLUMNS).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string().as_str(),
                &r.value_re,
                &r.value_im,
                &r.log_mag,
                &r.term_at_r,
                &r.partial_sum,
            ])
            .map_err(io)?;
        }
        w.into_inner().map_err(|e| AppError::Input(format!("csv: {e}")))
    }
}

/// What a command produced, before it is written out.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub outputs: Value,
    pub traces: Vec<Trace>,
}

/// The machine-readable record of one command run. Contains no timestamps
/// or paths beyond trace file names, so identical inputs give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub precision: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceFile>,
    pub outputs: Value,
    pub traces: Vec<String>,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// Writes `<stem>.<command>.json` and `<stem>.<trace>.csv` into `dir` and
/// returns the document with trace names filled in.
pub fn write_outputs(
    dir: &Path,
    stem: &str,
    mut doc: ResultDocument,
    traces: &[Trace],
) -> Result<(ResultDocument, Vec<PathBuf>), AppError> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for t in traces {
        let name = format!("{stem}.{}.csv", t.name);
        let path = dir.join(&name);
        std::fs::write(&path, t.to_csv()?)?;
        doc.traces.push(name);
        written.push(path);
    }
    let path = dir.join(format!("{stem}.{}.json", doc.command));
    std::fs::write(&path, doc.to_json())?;
    written.push(path);
    Ok((doc, written))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_columns() {
        let t = Trace {
            name: "boundary",
            rows: vec![TraceLine {
                n: 3,
                value_re: "0.5".into(),
                value_im: "0".into(),
                log_mag: render_log(Some(-0.5)),
                term_at_r: "1".into(),
                partial_sum: "2".into(),
            }],
        };
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "n,value_re,value_im,log_mag,term_at_r,partial_sum\n3,0.5,0,-5e-1,1,2\n");
        assert_eq!(render_log(None), "-inf");
    }
}
