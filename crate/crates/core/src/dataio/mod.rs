//! Dataset ingestion, label remapping and seeded instance ordering.

mod libsvm;
pub mod rng;
mod shuffle;

pub use libsvm::{load_libsvm, parse_libsvm, write_libsvm};
pub use rng::SeededRng;
pub use shuffle::{shuffle, Permutation};

use crate::error::{Error, Result};
use crate::linalg::SparseVector;
use crate::multiclass::ClassLabel;

/// Raw label values sorted ascending; position is the dense class id.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap {
    raw: Vec<f64>,
}

impl LabelMap {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn raw_labels(&self) -> &[f64] {
        &self.raw
    }

    pub fn id_of(&self, raw: f64) -> Option<ClassLabel> {
        self.raw
            .binary_search_by(|probe| probe.total_cmp(&(raw + 0.0)))
            .ok()
            .map(ClassLabel::from_index)
    }

    pub fn raw_of(&self, id: ClassLabel) -> f64 {
        self.raw[id.index()]
    }
}

/// Sorts the distinct raw labels and numbers them `0..m`.
pub fn remap_labels(raw: &[f64]) -> Result<LabelMap> {
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("raw labels"));
    }
    let mut labels: Vec<f64> = raw.iter().map(|v| v + 0.0).collect();
    labels.sort_by(f64::total_cmp);
    labels.dedup();
    if labels.len() < 2 {
        return Err(Error::TooFewClasses(labels.len()));
    }
    Ok(LabelMap { raw: labels })
}

/// Labelled sparse instances with their dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    instances: Vec<(SparseVector, ClassLabel)>,
    d: usize,
    label_map: LabelMap,
}

impl Dataset {
    pub fn new(
        instances: Vec<(SparseVector, ClassLabel)>,
        d: usize,
        label_map: LabelMap,
    ) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        if label_map.len() < 2 {
            return Err(Error::TooFewClasses(label_map.len()));
        }
        let m = label_map.len();
        for (x, y) in &instances {
            if x.dim() != d {
                return Err(Error::DimensionMismatch {
                    what: "instance dimension",
                    expected: d,
                    actual: x.dim(),
                });
            }
            if y.index() >= m {
                return Err(Error::InvalidLabel {
                    label: y.index(),
                    classes: m,
                });
            }
        }
        Ok(Self {
            name: String::new(),
            instances,
            d,
            label_map,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Free-form identifier used in reports; empty unless set.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The first `n` instances as a dataset of their own.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        let n = n.min(self.n());
        Ok(
            Self::new(self.instances[..n].to_vec(), self.d, self.label_map.clone())?
                .with_name(self.name.clone()),
        )
    }

    /// Dataset whose raw labels are the dense ids `0..classes`.
    pub fn with_dense_labels(
        instances: Vec<(SparseVector, ClassLabel)>,
        d: usize,
        classes: usize,
    ) -> Result<Self> {
        let raw: Vec<f64> = (0..classes).map(|c| c as f64).collect();
        Self::new(instances, d, remap_labels(&raw)?)
    }

    pub fn instances(&self) -> &[(SparseVector, ClassLabel)] {
        &self.instances
    }

    pub fn n(&self) -> usize {
        self.instances.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.label_map.len()
    }

    pub fn label_map(&self) -> &LabelMap {
        &self.label_map
    }

    /// Instance count of the most frequent class.
    pub fn majority_count(&self) -> usize {
        let mut counts = vec![0usize; self.m()];
        for (_, y) in &self.instances {
            counts[y.index()] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }

    /// Divides every feature by its largest absolute value so all values lie in
    /// `[-1, 1]`. Zeros stay zero, so sparsity is preserved.
    pub fn scale_unit_range(&mut self) -> Result<()> {
        let mut max_abs = vec![0.0f64; self.d];
        for (x, _) in &self.instances {
            for (j, v) in x.iter() {
                max_abs[j] = max_abs[j].max(v.abs());
            }
        }
        for (x, _) in self.instances.iter_mut() {
            let scaled = x
                .iter()
                .map(|(j, v)| (j, v / max_abs[j]))
                .collect::<Vec<_>>();
            *x = SparseVector::new(self.d, scaled)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remap_examples() {
        let map = remap_labels(&[-1.0, 1.0]).unwrap();
        assert_eq!(map.id_of(-1.0).unwrap().index(), 0);
        assert_eq!(map.id_of(1.0).unwrap().index(), 1);

        let map = remap_labels(&[3.0, 1.0, 2.0, 1.0]).unwrap();
        assert_eq!(map.raw_labels(), &[1.0, 2.0, 3.0]);
        assert_eq!(map.id_of(3.0).unwrap().index(), 2);
        assert!(map.id_of(4.0).is_none());

        assert!(matches!(remap_labels(&[5.0]), Err(Error::TooFewClasses(1))));
        assert!(matches!(
            remap_labels(&[5.0, 5.0]),
            Err(Error::TooFewClasses(1))
        ));
    }

    #[test]
    fn negative_zero_is_zero() {
        let map = remap_labels(&[-0.0, 0.0, 1.0]).unwrap();
        assert_eq!(map.len(), 2);
        assert_eq!(map.id_of(-0.0).unwrap().index(), 0);
    }

    #[test]
    fn scaling_bounds_values() {
        let mut ds = parse_libsvm("1 1:4 2:-2\n2 1:-8 3:0.5\n".as_bytes(), None).unwrap();
        ds.scale_unit_range().unwrap();
        assert_eq!(ds.instances()[0].0.values(), &[0.5, -1.0]);
        assert_eq!(ds.instances()[1].0.values(), &[-1.0, 1.0]);
    }

    #[test]
    fn majority() {
        let ds = parse_libsvm("1 1:1\n2 1:1\n2 1:1\n".as_bytes(), None).unwrap();
        assert_eq!(ds.majority_count(), 2);
    }
}
