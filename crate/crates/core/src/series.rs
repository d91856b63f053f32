use crate::error::{Error, Result};

/// Uniformly sampled named channels on a shared, strictly increasing time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    t: Vec<f64>,
    names: Vec<String>,
    channels: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Self {
            t: Vec::new(),
            names: names.iter().map(|n| n.as_ref().to_owned()).collect(),
            channels: vec![Vec::new(); names.len()],
        }
    }

    /// Append one sample. Panics if the row width or time ordering is wrong.
    pub fn push(&mut self, t: f64, row: &[f64]) {
        assert_eq!(row.len(), self.names.len(), "row width mismatch");
        if let Some(&last) = self.t.last() {
            assert!(t > last, "sample times must increase ({t} after {last})");
        }
        self.t.push(t);
        for (ch, &v) in self.channels.iter_mut().zip(row) {
            ch.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.channels[i].as_slice())
    }

    pub fn require(&self, name: &str) -> Result<&[f64]> {
        self.channel(name)
            .ok_or_else(|| Error::domain(format!("series has no channel `{name}`")))
    }

    pub fn channels(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.channels.iter().map(Vec::as_slice))
    }

    /// Add a derived channel of matching length.
    pub fn add_channel(&mut self, name: impl Into<String>, values: Vec<f64>) {
        assert_eq!(values.len(), self.t.len(), "channel length mismatch");
        self.names.push(name.into());
        self.channels.push(values);
    }

    /// Keep only samples whose time satisfies `keep`.
    pub fn filtered(&self, keep: impl Fn(f64) -> bool) -> TimeSeries {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(self.t[i])).collect();
        TimeSeries {
            t: idx.iter().map(|&i| self.t[i]).collect(),
            names: self.names.clone(),
            channels: self
                .channels
                .iter()
                .map(|ch| idx.iter().map(|&i| ch[i]).collect())
                .collect(),
        }
    }

    /// Uniform sample spacing, if the grid is uniform to relative 1e-9.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.t.len() < 2 {
            return None;
        }
        let n = self.t.len() - 1;
        let dt = (self.t[n] - self.t[0]) / n as f64;
        let uniform = self.t.windows(2).all(|w| {
            ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1e-300) + 1e-12 * w[1].abs()
        });
        uniform.then_some(dt)
    }
}
