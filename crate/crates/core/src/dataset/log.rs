use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{DatasetError, EventLog};
use crate::encoding::{ProcessTrace, Tag};

/// Column contract of event-log files: header row with `case_id`, `unit`,
/// `seq` (0-based, contiguous per case) and optional `class` and `tag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogFormat {
    pub delimiter: u8,
}

impl Default for LogFormat {
    fn default() -> Self {
        Self { delimiter: b',' }
    }
}

struct CaseRows {
    case_id: String,
    class: Option<String>,
    tag: Option<Tag>,
    first_line: u64,
    steps: Vec<(u64, String, u64)>,
}

pub fn load_event_log(path: &Path, format: &LogFormat) -> Result<EventLog, crate::Error> {
    let file = File::open(path).map_err(|e| crate::Error::io(path, e))?;
    Ok(read_event_log(file, format)?)
}

pub fn read_event_log<R: Read>(reader: R, format: &LogFormat) -> Result<EventLog, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(format.delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &'static str| headers.iter().position(|h| h == name);
    let case_col = col("case_id").ok_or(DatasetError::MissingColumn("case_id"))?;
    let unit_col = col("unit").ok_or(DatasetError::MissingColumn("unit"))?;
    let seq_col = col("seq").ok_or(DatasetError::MissingColumn("seq"))?;
    let class_col = col("class");
    let tag_col = col("tag");

    let mut cases: Vec<CaseRows> = Vec::new();
    let mut by_id: HashMap<String, usize> = HashMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let row_err = |message: String| DatasetError::Row { line, message };
        let field = |i: usize| record.get(i).unwrap_or("");

        let case_id = field(case_col);
        if case_id.is_empty() {
            return Err(row_err("empty case_id".into()));
        }
        let unit = field(unit_col);
        if unit.is_empty() {
            return Err(row_err("empty unit".into()));
        }
        let seq: u64 = field(seq_col)
            .parse()
            .map_err(|_| row_err(format!("seq {:?} is not a non-negative integer", field(seq_col))))?;
        let class = class_col.map(field).filter(|s| !s.is_empty()).map(str::to_owned);
        let tag = match tag_col.map(field).filter(|s| !s.is_empty()) {
            Some(t) => Some(t.parse::<Tag>().map_err(row_err)?),
            None => None,
        };

        let idx = *by_id.entry(case_id.to_owned()).or_insert_with(|| {
            cases.push(CaseRows {
                case_id: case_id.to_owned(),
                class: class.clone(),
                tag,
                first_line: line,
                steps: Vec::new(),
            });
            cases.len() - 1
        });
        let case = &mut cases[idx];
        if case.class != class {
            return Err(row_err(format!(
                "case {case_id} has class {:?} here but {:?} on line {}",
                class, case.class, case.first_line
            )));
        }
        if case.tag != tag {
            return Err(row_err(format!(
                "case {case_id} has tag {:?} here but {:?} on line {}",
                tag, case.tag, case.first_line
            )));
        }
        case.steps.push((seq, unit.to_owned(), line));
    }

    let mut traces = Vec::with_capacity(cases.len());
    for mut case in cases {
        case.steps.sort_by_key(|&(seq, _, line)| (seq, line));
        for (expected, (seq, _, line)) in case.steps.iter().enumerate() {
            let expected = expected as u64;
            if *seq < expected {
                return Err(DatasetError::Row {
                    line: *line,
                    message: format!("duplicate seq {seq} for case {}", case.case_id),
                });
            }
            if *seq > expected {
                return Err(DatasetError::Row {
                    line: *line,
                    message: format!(
                        "case {}: seq indices not contiguous, expected {expected} but found {seq}",
                        case.case_id
                    ),
                });
            }
        }
        traces.push(ProcessTrace {
            case_id: case.case_id,
            label: case.class,
            tag: case.tag,
            steps: case.steps.into_iter().map(|(_, u, _)| u).collect(),
        });
    }
    Ok(EventLog::new(traces))
}

/// Writes a log with all five columns, one row per step.
pub fn write_event_log<W: Write>(log: &EventLog, writer: W, format: &LogFormat) -> Result<(), DatasetError> {
    let mut w = csv::WriterBuilder::new().delimiter(format.delimiter).from_writer(writer);
    w.write_record(["case_id", "unit", "seq", "class", "tag"])?;
    for t in log.traces() {
        let class = t.label.as_deref().unwrap_or("");
        let tag = t.tag.map_or("", Tag::as_str);
        for (seq, unit) in t.steps.iter().enumerate() {
            w.write_record([t.case_id.as_str(), unit, &seq.to_string(), class, tag])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str) -> Result<EventLog, DatasetError> {
        read_event_log(text.as_bytes(), &LogFormat::default())
    }

    #[test]
    fn one_case_three_rows() {
        let log = read("case_id,unit,seq\nc1,a,0\nc1,b,1\nc1,a,2\n").unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log.traces()[0].steps, ["a", "b", "a"]);
        assert_eq!(log.traces()[0].label, None);
    }

    #[test]
    fn rows_out_of_order_are_sorted_by_seq() {
        let sorted = read("case_id,unit,seq\nc1,a,0\nc1,b,1\nc1,c,2\n").unwrap();
        let shuffled = read("case_id,unit,seq\nc1,c,2\nc1,a,0\nc1,b,1\n").unwrap();
        assert_eq!(sorted, shuffled);
    }

    #[test]
    fn duplicate_seq_is_rejected_with_line() {
        let err = read("case_id,unit,seq\nc1,a,0\nc1,b,0\n").unwrap_err();
        assert!(matches!(err, DatasetError::Row { line: 3, .. }), "{err}");
    }

    #[test]
    fn gap_in_seq_is_rejected() {
        let err = read("case_id,unit,seq\nc1,a,0\nc1,b,2\n").unwrap_err();
        assert!(matches!(err, DatasetError::Row { line: 3, .. }), "{err}");
        assert!(read("case_id,unit,seq\nc1,a,1\n").is_err());
    }

    #[test]
    fn missing_columns() {
        assert!(matches!(read("case_id,seq\nc,0\n"), Err(DatasetError::MissingColumn("unit"))));
        assert!(matches!(read("unit,seq\na,0\n"), Err(DatasetError::MissingColumn("case_id"))));
        assert!(matches!(read("case_id,unit\nc,a\n"), Err(DatasetError::MissingColumn("seq"))));
    }

    #[test]
    fn class_and_tag_columns() {
        let log = read("case_id,unit,seq,class,tag\nx,a,0,A,SP\ny,b,0,A,NP\nz,c,0,H,\n").unwrap();
        let t = log.traces();
        assert_eq!((t[0].label.as_deref(), t[0].tag), (Some("A"), Some(Tag::Sp)));
        assert_eq!(t[1].tag, Some(Tag::Np));
        assert_eq!((t[2].label.as_deref(), t[2].tag), (Some("H"), None));
        assert!(read("case_id,unit,seq,tag\nx,a,0,maybe\n").is_err());
        assert!(read("case_id,unit,seq,class\nx,a,0,A\nx,b,1,B\n").is_err());
    }

    #[test]
    fn bad_seq_value() {
        let err = read("case_id,unit,seq\nc,a,-1\n").unwrap_err();
        assert!(matches!(err, DatasetError::Row { line: 2, .. }));
    }

    #[test]
    fn custom_delimiter_and_write_round_trip() {
        let fmt = LogFormat { delimiter: b';' };
        let log = read_event_log("case_id;unit;seq;class;tag\nq;b;1;A;SP\nq;a;0;A;SP\n".as_bytes(), &fmt).unwrap();
        let mut out = Vec::new();
        write_event_log(&log, &mut out, &fmt).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "case_id;unit;seq;class;tag\nq;a;0;A;SP\nq;b;1;A;SP\n");
        assert_eq!(read_event_log(out.as_slice(), &fmt).unwrap(), log);
    }

    #[test]
    fn empty_log_has_no_traces() {
        assert!(read("case_id,unit,seq\n").unwrap().is_empty());
    }
}
