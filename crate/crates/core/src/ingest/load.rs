//! Delimited edge-list readers.

use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use csv::{ByteRecord, ReaderBuilder};
use serde::{Deserialize, Serialize};

use super::IngestError;

/// One data line of an edge list, before any classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub source_id: String,
    pub src: String,
    /// `None` for node-only lines.
    pub dst: Option<String>,
    /// 1-based line number in the source file.
    pub line: u64,
}

impl RawRecord {
    pub fn edge(source_id: &str, src: &str, dst: &str, line: u64) -> RawRecord {
        RawRecord {
            source_id: source_id.to_string(),
            src: src.to_string(),
            dst: Some(dst.to_string()),
            line,
        }
    }

    pub fn node(source_id: &str, src: &str, line: u64) -> RawRecord {
        RawRecord {
            source_id: source_id.to_string(),
            src: src.to_string(),
            dst: None,
            line,
        }
    }

    pub fn is_edge(&self) -> bool {
        self.dst.is_some()
    }
}

/// Column layout of an edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeFormat {
    pub delimiter: u8,
    /// Zero-based column holding the link source.
    pub src_col: usize,
    /// Zero-based column holding the link target; `None` reads node lists.
    pub dst_col: Option<usize>,
    pub has_header: bool,
    /// Lines starting with this byte are skipped.
    pub comment: Option<u8>,
}

impl EdgeFormat {
    /// The canonical dataset layout written by [`write_dataset`](super::write_dataset).
    pub fn canonical() -> EdgeFormat {
        EdgeFormat {
            delimiter: b',',
            src_col: 0,
            dst_col: Some(1),
            has_header: true,
            comment: Some(b'#'),
        }
    }

    pub fn tsv() -> EdgeFormat {
        EdgeFormat {
            delimiter: b'\t',
            ..EdgeFormat::canonical()
        }
    }
}

impl Default for EdgeFormat {
    fn default() -> Self {
        EdgeFormat::canonical()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalformedLine {
    pub line: u64,
    pub message: String,
}

/// Records read from one file plus the lines that could not be used.
#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub records: Vec<RawRecord>,
    pub malformed: Vec<MalformedLine>,
}

/// Reads an edge list from `path`.
///
/// Lines with too few columns or an empty source are collected in
/// [`LoadReport::malformed`]. Invalid UTF-8 aborts the load with the line
/// number, since the rest of the file cannot be trusted either.
pub fn load_edge_list(path: &Path, format: &EdgeFormat) -> Result<LoadReport, IngestError> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    parse_edge_list(&bytes, &path.display().to_string(), format).map_err(|e| match e {
        IngestError::Decode { line, .. } => IngestError::Decode {
            path: path.to_path_buf(),
            line,
        },
        other => other,
    })
}

/// Maps record positions to 1-based line numbers. The csv reader's own line
/// counter ignores comment and blank lines, and a record's byte position is
/// taken before those lines are skipped.
struct LineCounter<'a> {
    bytes: &'a [u8],
    comment: Option<u8>,
    offset: usize,
    line: u64,
}

impl LineCounter<'_> {
    fn line_at(&mut self, byte: u64) -> u64 {
        let mut byte = (byte as usize).min(self.bytes.len());
        while byte < self.bytes.len() {
            let rest = &self.bytes[byte..];
            let skip = matches!(rest[0], b'\n' | b'\r') || Some(rest[0]) == self.comment;
            if !skip {
                break;
            }
            byte += rest.iter().position(|&b| b == b'\n').map_or(rest.len(), |p| p + 1);
        }
        if byte < self.offset {
            self.offset = 0;
            self.line = 1;
        }
        self.line += self.bytes[self.offset..byte].iter().filter(|&&b| b == b'\n').count() as u64;
        self.offset = byte;
        self.line
    }
}

/// Parses edge-list bytes already in memory. `source_id` tags every record.
pub fn parse_edge_list(
    bytes: &[u8],
    source_id: &str,
    format: &EdgeFormat,
) -> Result<LoadReport, IngestError> {
    let mut reader = ReaderBuilder::new()
        .delimiter(format.delimiter)
        .has_headers(format.has_header)
        .comment(format.comment)
        .flexible(true)
        .from_reader(bytes);

    let mut lines = LineCounter {
        bytes,
        comment: format.comment,
        offset: 0,
        line: 1,
    };
    let mut report = LoadReport::default();
    let mut record = ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(err) => {
                let line = err.position().map(|p| lines.line_at(p.byte())).unwrap_or(0);
                if let csv::ErrorKind::Io(e) = err.kind() {
                    return Err(IngestError::Io {
                        path: source_id.into(),
                        source: io::Error::new(e.kind(), e.to_string()),
                    });
                }
                report.malformed.push(MalformedLine {
                    line,
                    message: err.to_string(),
                });
                continue;
            }
        }
        let line = record.position().map(|p| lines.line_at(p.byte())).unwrap_or(0);
        if std::str::from_utf8(record.as_slice()).is_err() {
            return Err(IngestError::Decode {
                path: source_id.into(),
                line,
            });
        }
        let field = |i: usize| record.get(i).map(|b| String::from_utf8_lossy(b).trim().to_string());

        let src = match field(format.src_col) {
            Some(s) if !s.is_empty() => s,
            Some(_) => {
                report.malformed.push(MalformedLine {
                    line,
                    message: "empty source field".into(),
                });
                continue;
            }
            None => {
                report.malformed.push(MalformedLine {
                    line,
                    message: format!(
                        "expected column {} but line has {} field(s)",
                        format.src_col + 1,
                        record.len()
                    ),
                });
                continue;
            }
        };
        let dst = match format.dst_col {
            None => None,
            Some(col) => match field(col) {
                Some(d) if !d.is_empty() => Some(d),
                // A trailing empty field marks a node-only line.
                Some(_) => None,
                None if record.len() == 1 => None,
                None => {
                    report.malformed.push(MalformedLine {
                        line,
                        message: format!(
                            "expected column {} but line has {} field(s)",
                            col + 1,
                            record.len()
                        ),
                    });
                    continue;
                }
            },
        };
        report.records.push(RawRecord {
            source_id: source_id.to_string(),
            src,
            dst,
            line,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, format: &EdgeFormat) -> LoadReport {
        parse_edge_list(text.as_bytes(), "mem", format).unwrap()
    }

    const A: &str = "aaaaaaaaaaaaaaaa.onion";
    const B: &str = "bbbbbbbbbbbbbbbb.onion";

    #[test]
    fn two_line_csv_without_header() {
        let format = EdgeFormat {
            has_header: false,
            ..EdgeFormat::canonical()
        };
        let report = parse(&format!("{A},{B}\n{B},{A}"), &format);
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.records[0], RawRecord::edge("mem", A, B, 1));
        assert_eq!(report.records[1].line, 2);
        assert!(report.malformed.is_empty());
    }

    #[test]
    fn header_is_skipped() {
        let report = parse(&format!("src,dst\n{A},{B}\n"), &EdgeFormat::canonical());
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.records[0].line, 2);
    }

    #[test]
    fn comments_and_custom_columns() {
        let format = EdgeFormat {
            delimiter: b'\t',
            src_col: 2,
            dst_col: Some(0),
            has_header: false,
            comment: Some(b'#'),
        };
        let text = format!("# exported\n{B}\tx\t{A}\n# trailer\n{A}\ty\t{B}\n");
        let report = parse(&text, &format);
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.records[0].src, A);
        assert_eq!(report.records[0].dst.as_deref(), Some(B));
        assert_eq!(report.records[0].line, 2);
        assert_eq!(report.records[1].line, 4);
    }

    #[test]
    fn node_only_lines() {
        let report = parse(&format!("src,dst\n{A},\n{B}\n"), &EdgeFormat::canonical());
        assert_eq!(report.records.len(), 2);
        assert!(report.records.iter().all(|r| !r.is_edge()));
    }

    #[test]
    fn malformed_lines_are_reported() {
        let format = EdgeFormat {
            src_col: 0,
            dst_col: Some(2),
            has_header: false,
            ..EdgeFormat::canonical()
        };
        let report = parse(&format!("{A},x,{B}\n{A},x\n,x,{B}\n"), &format);
        assert_eq!(report.records.len(), 1);
        let lines: Vec<u64> = report.malformed.iter().map(|m| m.line).collect();
        assert_eq!(lines, vec![2, 3]);
    }

    #[test]
    fn invalid_utf8_reports_line() {
        let mut bytes = format!("src,dst\n{A},{B}\n").into_bytes();
        bytes.extend_from_slice(b"\xff\xfe.onion,x\n");
        match parse_edge_list(&bytes, "mem", &EdgeFormat::canonical()) {
            Err(IngestError::Decode { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected decode error, got {other:?}"),
        }
    }

    #[test]
    fn missing_file() {
        let err = load_edge_list(Path::new("/nonexistent/edges.csv"), &EdgeFormat::canonical());
        assert!(matches!(err, Err(IngestError::Io { .. })));
    }

    #[test]
    fn record_count_matches_independent_line_scan() {
        let mut text = String::from("src,dst\n# generated\n");
        for i in 0..250 {
            text.push_str(&format!("n{i}.i2p,n{}.i2p\n", (i * 7 + 3) % 250));
            if i % 50 == 0 {
                text.push_str("# checkpoint\n");
            }
        }
        let data_lines = text
            .lines()
            .skip(1)
            .filter(|l| !l.starts_with('#') && !l.is_empty())
            .count();
        let report = parse(&text, &EdgeFormat::canonical());
        assert_eq!(report.records.len(), data_lines);
    }
}
