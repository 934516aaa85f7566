//! Prediction CSV: `sample_id,label,<class_0>,...,<class_k>`, one row per
//! sample, probabilities as decimal text in vocabulary order.

use std::io::{Read, Write};
use std::path::Path;

use super::Vocabulary;
use crate::error::{Error, Result};
use crate::fusion::ProbVector;

/// Rows whose probabilities miss a unit sum by at most this much are renormalised.
pub const ROW_SUM_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub sample_id: String,
    pub label: usize,
    pub probs: ProbVector,
}

pub fn load_predictions_csv(path: &Path, vocab: &Vocabulary) -> Result<Vec<PredictionRow>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    read_predictions(std::fs::File::open(path)?, vocab)
}

fn expected_header(vocab: &Vocabulary) -> Vec<String> {
    let mut h = vec!["sample_id".to_string(), "label".to_string()];
    h.extend(vocab.names().iter().cloned());
    h
}

pub fn read_predictions<R: Read>(reader: R, vocab: &Vocabulary) -> Result<Vec<PredictionRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let expected = expected_header(vocab);
    if header != expected {
        return Err(Error::HeaderMismatch {
            expected: expected.join(","),
            found: header.join(","),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let sample_id = row[0].to_string();
        let label = vocab.parse_label(&row[1]).ok_or_else(|| Error::UnknownLabel {
            label: row[1].to_string(),
            line,
        })?;
        let probs = row
            .iter()
            .skip(2)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|p| p.is_finite() && *p >= 0.0)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("invalid probability {v:?}"),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::RowSumError { sample_id, sum });
        }
        // rows already valid to within the distribution tolerance are kept verbatim
        let probs = if (sum - 1.0).abs() <= ProbVector::SUM_TOLERANCE {
            ProbVector::new(probs)?
        } else {
            ProbVector::normalized(probs)?
        };
        out.push(PredictionRow {
            sample_id,
            label,
            probs,
        });
    }
    Ok(out)
}

/// Labels are written as class names; probabilities in shortest round-trip form.
pub fn write_predictions<W: Write>(writer: W, vocab: &Vocabulary, rows: &[PredictionRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(expected_header(vocab))?;
    for row in rows {
        if row.probs.n_classes() != vocab.len() {
            return Err(Error::InvalidInput(format!(
                "sample {} has {} probabilities for {} classes",
                row.sample_id,
                row.probs.n_classes(),
                vocab.len()
            )));
        }
        let label = vocab
            .by_id(row.label)
            .ok_or_else(|| Error::InvalidInput(format!("label id {} out of range", row.label)))?;
        let mut fields = vec![row.sample_id.clone(), label.name];
        fields.extend(row.probs.as_slice().iter().map(|p| p.to_string()));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new(["Normal", "ASD"]).unwrap()
    }

    #[test]
    fn exact_rows_unchanged() {
        let text = "sample_id,label,Normal,ASD\ns1,Normal,0.25,0.75\ns2,1,0.5,0.5\n";
        let rows = read_predictions(text.as_bytes(), &vocab()).unwrap();
        assert_eq!(rows[0].probs.as_slice(), &[0.25, 0.75]);
        assert_eq!(rows[1].label, 1);
    }

    #[test]
    fn near_one_is_renormalized() {
        let text = "sample_id,label,Normal,ASD\ns1,ASD,0.5005,0.5\n";
        let rows = read_predictions(text.as_bytes(), &vocab()).unwrap();
        let p = rows[0].probs.as_slice();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((p[0] - 0.5005 / 1.0005).abs() < 1e-15);
    }

    #[test]
    fn half_sum_rejected() {
        let text = "sample_id,label,Normal,ASD\nbad,ASD,0.25,0.25\n";
        match read_predictions(text.as_bytes(), &vocab()) {
            Err(Error::RowSumError { sample_id, sum }) => {
                assert_eq!(sample_id, "bad");
                assert_eq!(sum, 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_must_match_vocabulary_order() {
        let text = "sample_id,label,ASD,Normal\ns1,ASD,0.5,0.5\n";
        assert!(matches!(
            read_predictions(text.as_bytes(), &vocab()),
            Err(Error::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn write_then_read() {
        let rows = vec![PredictionRow {
            sample_id: "s9".into(),
            label: 0,
            probs: ProbVector::normalized(vec![1.0, 2.0]).unwrap(),
        }];
        let mut buf = Vec::new();
        write_predictions(&mut buf, &vocab(), &rows).unwrap();
        assert_eq!(read_predictions(&buf[..], &vocab()).unwrap(), rows);
    }

    #[test]
    fn rejects_negative_and_unknown_label() {
        let neg = "sample_id,label,Normal,ASD\ns,ASD,-0.5,1.5\n";
        assert!(matches!(
            read_predictions(neg.as_bytes(), &vocab()),
            Err(Error::Parse { .. })
        ));
        let unk = "sample_id,label,Normal,ASD\ns,PFO,0.5,0.5\n";
        assert!(matches!(
            read_predictions(unk.as_bytes(), &vocab()),
            Err(Error::UnknownLabel { .. })
        ));
    }
}
