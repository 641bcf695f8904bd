use std::fmt::Write as _;

/// Per-repeat metric values for one task plus the settings that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: String,
    pub ratio: f64,
    pub seed: u64,
    pub metrics: Vec<String>,
    /// `values[repeat][metric]`
    pub values: Vec<Vec<f64>>,
    /// Degenerate classifiers, skipped instances and similar notes.
    pub flags: Vec<String>,
    pub config: Vec<(String, String)>,
}

impl EvalReport {
    pub fn repeats(&self) -> usize {
        self.values.len()
    }

    fn column(&self, metric: &str) -> Option<Vec<f64>> {
        let j = self.metrics.iter().position(|m| m == metric)?;
        Some(self.values.iter().map(|r| r[j]).collect())
    }

    pub fn mean(&self, metric: &str) -> Option<f64> {
        let col = self.column(metric)?;
        if col.is_empty() {
            return None;
        }
        Some(col.iter().sum::<f64>() / col.len() as f64)
    }

    /// Population standard deviation over repeats.
    pub fn std(&self, metric: &str) -> Option<f64> {
        let col = self.column(metric)?;
        let mean = self.mean(metric)?;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / col.len() as f64;
        Some(var.sqrt())
    }

    /// `task,ratio,repeat,metric,value`
    pub fn raw_csv(&self) -> String {
        let mut out = String::from("task,ratio,repeat,metric,value\n");
        for (r, row) in self.values.iter().enumerate() {
            for (m, v) in self.metrics.iter().zip(row) {
                let _ = writeln!(out, "{},{},{r},{m},{v}", self.task, self.ratio);
            }
        }
        out
    }

    /// `task,ratio,metric,mean,std,repeats,seed`
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("task,ratio,metric,mean,std,repeats,seed\n");
        for m in &self.metrics {
            let _ = writeln!(
                out,
                "{},{},{m},{},{},{},{}",
                self.task,
                self.ratio,
                self.mean(m).unwrap_or(f64::NAN),
                self.std(m).unwrap_or(f64::NAN),
                self.repeats(),
                self.seed
            );
        }
        out
    }

    /// `key,value` rows: settings first, then one `flag` row per note.
    pub fn config_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.config {
            let _ = writeln!(out, "{k},{v}");
        }
        for f in &self.flags {
            let _ = writeln!(out, "flag,\"{}\"", f.replace('"', "'"));
        }
        out
    }
}
