//! CSV readers and writers for datasets, clusterings, reference labels,
//! representatives and sessions.
//!
//! Floats are written in Rust's shortest round-trip form, so a value read
//! back is bit-identical to the one written.

use std::io::{Read, Write};

use thiserror::Error;

use crate::cluster::{Clustering, Representatives};
use crate::dataset::{DataError, Dataset};
use crate::logs::Session;
use crate::validity::ReferenceLabels;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("record {record}: {detail}")]
    Parse { record: usize, detail: String },
}

fn parse_err(record: usize, detail: impl Into<String>) -> IoError {
    IoError::Parse {
        record,
        detail: detail.into(),
    }
}

/// Column names `x0, x1, ...` for datasets without a natural header.
pub fn default_header(dim: usize) -> Vec<String> {
    (0..dim).map(|j| format!("x{j}")).collect()
}

/// Writes the header row followed by one row per point.
pub fn write_dataset<W: Write>(out: W, data: &Dataset, header: &[String]) -> Result<(), IoError> {
    if header.len() != data.dim() {
        return Err(DataError::DimensionMismatch {
            left: header.len(),
            right: data.dim(),
        }
        .into());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in data.rows() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dataset CSV; the first row names the columns.
pub fn read_dataset<R: Read>(input: R) -> Result<(Dataset, Vec<String>), IoError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let cols = header.len();
    let mut values = Vec::new();
    let mut rows = 0;
    for (i, record) in r.records().enumerate() {
        let record = record?;
        if record.len() != cols {
            return Err(DataError::Ragged {
                row: i,
                expected: cols,
                found: record.len(),
            }
            .into());
        }
        for field in record.iter() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_err(i + 1, format!("not a number: {field:?}")))?;
            values.push(v);
        }
        rows += 1;
    }
    let data = if rows == 0 {
        Dataset::empty(cols)
    } else {
        Dataset::from_flat(values, rows, cols)?
    };
    Ok((data, header))
}

/// `point_index,cluster_id`, with -1 for noise.
pub fn write_clustering<W: Write>(out: W, clustering: &Clustering) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point_index", "cluster_id"])?;
    for (i, l) in clustering.labels().iter().enumerate() {
        w.write_record([i.to_string(), l.as_i64().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(point_index, value)` records and checks the indices are exactly
/// `0..m` in some order.
fn read_indexed<R: Read>(input: R, what: &str) -> Result<Vec<String>, IoError> {
    let mut r = csv::Reader::from_reader(input);
    let mut pairs: Vec<(usize, String)> = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(parse_err(i + 1, format!("expected point_index,{what}")));
        }
        let index: usize = record[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(i + 1, format!("bad point_index {:?}", &record[0])))?;
        pairs.push((index, record[1].trim().to_owned()));
    }
    pairs.sort_by_key(|p| p.0);
    for (expected, (index, _)) in pairs.iter().enumerate() {
        if *index != expected {
            return Err(parse_err(
                expected + 1,
                format!("point_index {expected} missing or duplicated"),
            ));
        }
    }
    Ok(pairs.into_iter().map(|p| p.1).collect())
}

pub fn read_clustering<R: Read>(input: R) -> Result<Clustering, IoError> {
    let ids = read_indexed(input, "cluster_id")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.parse::<i64>()
                .map_err(|_| parse_err(i + 1, format!("bad cluster_id {v:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Clustering::from_signed_ids(&ids))
}

/// `point_index,class_id`; class ids are arbitrary strings.
pub fn write_labels<W: Write>(out: W, labels: &ReferenceLabels) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point_index", "class_id"])?;
    for (i, c) in labels.classes().iter().enumerate() {
        w.write_record([i.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_labels<R: Read>(input: R) -> Result<ReferenceLabels, IoError> {
    Ok(ReferenceLabels::from_ids(&read_indexed(input, "class_id")?))
}

/// One row per cluster: `cluster_id,kind,row_index,<coordinates>`.
/// `row_index` is empty for centroids.
pub fn write_representatives<W: Write>(out: W, reps: &Representatives) -> Result<(), IoError> {
    let dim = reps.points.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["cluster_id".to_owned(), "kind".to_owned(), "row_index".to_owned()];
    header.extend(default_header(dim));
    w.write_record(&header)?;
    for (c, point) in reps.points.iter().enumerate() {
        let row = reps.rows.as_ref().map_or(String::new(), |r| r[c].to_string());
        let mut record = vec![c.to_string(), reps.kind.name().to_owned(), row];
        record.extend(point.iter().map(|v| v.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// `session_id,user_id,url,dwell_seconds`, one row per page view.
pub fn write_sessions<W: Write>(out: W, sessions: &[Session]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["session_id", "user_id", "url", "dwell_seconds"])?;
    for (id, s) in sessions.iter().enumerate() {
        let user = s.user.to_string();
        for e in &s.entries {
            w.write_record([id.to_string(), user.clone(), e.uri.clone(), e.dwell_seconds.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::Label;

    #[test]
    fn dataset_round_trip() {
        let data = Dataset::from_rows(&[[0.1, -2.5e-300], [1.0 / 3.0, 7.0]]).unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &data, &default_header(2)).unwrap();
        assert!(buf.starts_with(b"x0,x1\n"));
        let (back, header) = read_dataset(buf.as_slice()).unwrap();
        assert_eq!(back, data);
        assert_eq!(header, ["x0", "x1"]);
    }

    #[test]
    fn header_only_dataset() {
        let (data, header) = read_dataset("/a,/b\n".as_bytes()).unwrap();
        assert_eq!((data.len(), data.dim()), (0, 2));
        assert_eq!(header, ["/a", "/b"]);
    }

    #[test]
    fn bad_number_is_reported() {
        let err = read_dataset("x0\n1\nfoo\n".as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::Parse { record: 2, .. }));
    }

    #[test]
    fn clustering_round_trip_with_noise() {
        let c = Clustering::from_signed_ids(&[0, -1, 1, 0]);
        let mut buf = Vec::new();
        write_clustering(&mut buf, &c).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "point_index,cluster_id\n0,0\n1,-1\n2,1\n3,0\n"
        );
        let back = read_clustering(buf.as_slice()).unwrap();
        assert_eq!(back.labels()[1], Label::Noise);
        assert!(back.same_partition(&c));
    }

    #[test]
    fn labels_accept_any_row_order() {
        let labels = read_labels("point_index,class_id\n1,b\n0,a\n2,b\n".as_bytes()).unwrap();
        assert_eq!(labels.classes(), [0, 1, 1]);
        assert!(read_labels("point_index,class_id\n0,a\n2,b\n".as_bytes()).is_err());
    }
}
