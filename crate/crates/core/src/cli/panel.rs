//! Panel file ingestion.
//!
//! Format: UTF-8 CSV with the exact header `country_id,month_id,fatalities`,
//! one row per country-month, fatalities a non-negative integer. Every
//! country must cover the same contiguous month range.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use crate::error::{Error, Result};
use crate::forecaster::FatalitySeries;

pub const HEADER: [&str; 3] = ["country_id", "month_id", "fatalities"];

pub fn read_panel_file(path: &Path) -> Result<Vec<FatalitySeries>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::InvalidPanel(format!("cannot open {}: {e}", path.display())))?;
    read_panel(file)
}

pub fn read_panel<R: io::Read>(input: R) -> Result<Vec<FatalitySeries>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = reader.headers().map_err(|e| Error::InvalidPanel(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::InvalidPanel(format!(
            "expected header `{}`, found `{}`",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut by_country: BTreeMap<String, BTreeMap<i64, u64>> = BTreeMap::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::InvalidPanel(format!("line {line}: {e}")))?;
        let country = rec[0].trim().to_string();
        if country.is_empty() {
            return Err(Error::InvalidPanel(format!("line {line}: empty country_id")));
        }
        let month: i64 = rec[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidPanel(format!("line {line}: month_id `{}` is not an integer", &rec[1])))?;
        let count: u64 = rec[2].trim().parse().map_err(|_| {
            Error::InvalidPanel(format!(
                "line {line}: fatalities `{}` is not a non-negative integer",
                &rec[2]
            ))
        })?;
        if by_country.entry(country.clone()).or_default().insert(month, count).is_some() {
            return Err(Error::InvalidPanel(format!(
                "line {line}: duplicate row for country {country}, month {month}"
            )));
        }
    }
    if by_country.is_empty() {
        return Err(Error::InvalidPanel("panel has no rows".into()));
    }
    let first = by_country.values().map(|m| *m.keys().next().expect("non-empty")).min().expect("non-empty");
    let last = by_country.values().map(|m| *m.keys().last().expect("non-empty")).max().expect("non-empty");
    let gaps: Vec<(String, i64)> = by_country
        .iter()
        .flat_map(|(c, months)| {
            (first..=last).filter(|m| !months.contains_key(m)).map(move |m| (c.clone(), m))
        })
        .collect();
    if !gaps.is_empty() {
        return Err(Error::IncompletePanel(gaps));
    }
    by_country
        .into_iter()
        .map(|(c, months)| FatalitySeries::new(c, first, months.into_values().collect()))
        .collect()
}

pub fn write_panel<W: io::Write>(panel: &[FatalitySeries], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for s in panel {
        for (i, x) in s.counts().iter().enumerate() {
            w.write_record([s.country_id().to_string(), (s.first_month() + i as i64).to_string(), x.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_valid_panel() {
        let csv = "country_id,month_id,fatalities\nb,2,5\na,1,0\na,2,3\nb,1,1\n";
        let p = read_panel(csv.as_bytes()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].country_id(), "a");
        assert_eq!(p[0].counts(), &[0, 3]);
        assert_eq!(p[1].counts(), &[1, 5]);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            "country,month_id,fatalities\na,1,0\n",
            "country_id,month_id,fatalities\na,1,-1\n",
            "country_id,month_id,fatalities\na,1,1.5\n",
            "country_id,month_id,fatalities\na,x,1\n",
            "country_id,month_id,fatalities\na,1,1\na,1,2\n",
            "country_id,month_id,fatalities\n",
        ];
        for c in cases {
            assert!(read_panel(c.as_bytes()).is_err(), "{c}");
        }
    }

    #[test]
    fn names_gaps() {
        let csv = "country_id,month_id,fatalities\na,1,0\na,2,0\na,3,0\nb,1,0\nb,3,0\n";
        match read_panel(csv.as_bytes()) {
            Err(Error::IncompletePanel(g)) => assert_eq!(g, vec![("b".to_string(), 2)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn write_then_read() {
        let p = vec![FatalitySeries::new("x", 5, vec![1, 2, 3]).unwrap()];
        let mut buf = Vec::new();
        write_panel(&p, &mut buf).unwrap();
        assert_eq!(read_panel(buf.as_slice()).unwrap(), p);
    }
}
