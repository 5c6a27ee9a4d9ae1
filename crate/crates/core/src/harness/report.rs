use std::io::Write;

use super::ExperimentRow;

pub const CSV_HEADER: [&str; 9] = [
    "point",
    "n",
    "m",
    "n_hat",
    "trial",
    "quantum_queries",
    "preprocessing_queries",
    "classical_queries",
    "correct",
];

/// Writes one line per row. `wall_time` is appended only when `timings`
/// is set, so that reruns of the same spec produce identical files.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W, timings: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if timings {
        header.push("wall_time");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.point.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.n_hat.to_string(),
            r.trial.to_string(),
            r.quantum_queries.to_string(),
            r.preprocessing_queries.to_string(),
            r.classical_queries.to_string(),
            u8::from(r.correct).to_string(),
        ];
        if timings {
            rec.push(format!("{:.16e}", r.wall_time));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub n: usize,
    pub m: usize,
    pub n_hat: f64,
    pub trials: usize,
    pub mean_quantum: f64,
    pub mean_classical: f64,
    pub error_rate: f64,
}

/// Per-point means, in point order.
pub fn summarize(rows: &[ExperimentRow]) -> Vec<PointSummary> {
    let mut points: Vec<usize> = rows.iter().map(|r| r.point).collect();
    points.sort_unstable();
    points.dedup();
    points
        .into_iter()
        .map(|p| {
            let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.point == p).collect();
            let len = group.len() as f64;
            let mean = |f: &dyn Fn(&ExperimentRow) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / len;
            PointSummary {
                n: group[0].n,
                m: group[0].m,
                n_hat: mean(&|r| r.n_hat as f64),
                trials: group.len(),
                mean_quantum: mean(&|r| r.quantum_queries as f64),
                mean_classical: mean(&|r| r.classical_queries as f64),
                error_rate: mean(&|r| if r.correct { 0.0 } else { 1.0 }),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(point: usize, trial: usize, q: u64, correct: bool) -> ExperimentRow {
        ExperimentRow {
            point,
            n: 10,
            m: 20,
            n_hat: 8,
            trial,
            quantum_queries: q,
            preprocessing_queries: 0,
            classical_queries: 20,
            correct,
            wall_time: 0.125,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[row(0, 0, 40, true), row(0, 1, 44, false)], &mut buf, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "point,n,m,n_hat,trial,quantum_queries,preprocessing_queries,classical_queries,correct\n\
             0,10,20,8,0,40,0,20,1\n0,10,20,8,1,44,0,20,0\n"
        );
        let mut buf = Vec::new();
        write_csv(&[row(0, 0, 40, true)], &mut buf, true).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(",1.2500000000000000e-1\n"));
    }

    #[test]
    fn summary_means() {
        let s = summarize(&[row(0, 0, 40, true), row(0, 1, 44, false), row(1, 0, 10, true)]);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].mean_quantum, 42.0);
        assert_eq!(s[0].error_rate, 0.5);
        assert_eq!(s[1].trials, 1);
    }
}
