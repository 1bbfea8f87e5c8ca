use crate::error::{Error, Result};

/// Ordered subsystem profile of a multipartite operator.
///
/// The first subsystem is the most significant digit of the joint index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Layout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl Layout {
    pub fn new<S, I>(parts: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, usize)>,
    {
        let mut layout = Layout::default();
        for (label, dim) in parts {
            let label = label.into();
            if dim == 0 {
                return Err(Error::InvalidArgument(format!("subsystem `{label}` has dimension 0")));
            }
            if layout.labels.contains(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            layout.labels.push(label);
            layout.dims.push(dim);
        }
        Ok(layout)
    }

    /// A single subsystem.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Layout::new([(label, dim)])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    /// Product of the dimensions of the named subsystems.
    pub fn dim_of_all(&self, labels: &[&str]) -> Result<usize> {
        labels.iter().try_fold(1, |acc, l| Ok(acc * self.dim_of(l)?))
    }

    pub fn concat(&self, other: &Layout) -> Result<Layout> {
        Layout::new(
            self.labels
                .iter()
                .chain(other.labels.iter())
                .cloned()
                .zip(self.dims.iter().chain(other.dims.iter()).copied()),
        )
    }

    /// Subsystems named in `labels`, in the order given.
    pub fn select(&self, labels: &[&str]) -> Result<Layout> {
        let parts = labels
            .iter()
            .map(|l| Ok((l.to_string(), self.dim_of(l)?)))
            .collect::<Result<Vec<_>>>()?;
        Layout::new(parts)
    }

    /// Labels not in `labels`, in original order.
    pub fn complement(&self, labels: &[&str]) -> Vec<&str> {
        self.labels
            .iter()
            .map(String::as_str)
            .filter(|l| !labels.contains(l))
            .collect()
    }

    pub fn check_labels(&self, labels: &[&str]) -> Result<()> {
        for (i, l) in labels.iter().enumerate() {
            self.position(l)?;
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Ok(())
    }

    /// For each joint index in the order `new_order`, the joint index in this layout.
    pub(crate) fn permutation_map(&self, new_order: &[&str]) -> Result<Vec<usize>> {
        if new_order.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "permutation lists {} of {} subsystems",
                new_order.len(),
                self.len()
            )));
        }
        self.check_labels(new_order)?;
        let strides = self.strides();
        let positions: Vec<usize> = new_order
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<_>>()?;
        let new_dims: Vec<usize> = positions.iter().map(|&p| self.dims[p]).collect();
        let total = self.total_dim();
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; new_dims.len()];
        for _ in 0..total {
            map.push(
                digits
                    .iter()
                    .zip(&positions)
                    .map(|(d, &p)| d * strides[p])
                    .sum(),
            );
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < new_dims[k] {
                    break;
                }
                digits[k] = 0;
            }
        }
        Ok(map)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }
}
