use numcore::Matrix;

/// Where a view matrix came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Fitted/computed from the corpus (counts, tf-idf, embedding means).
    Fitted,
    /// Loaded from a precomputed feature file.
    Loaded,
}

/// One dense row-per-document feature representation of the corpus.
#[derive(Debug, Clone)]
pub struct ViewMatrix {
    pub name: String,
    pub matrix: Matrix,
    pub provenance: Provenance,
}

impl ViewMatrix {
    pub fn new(name: impl Into<String>, matrix: Matrix, provenance: Provenance) -> Self {
        ViewMatrix {
            name: name.into(),
            matrix,
            provenance,
        }
    }

    pub fn docs(&self) -> usize {
        self.matrix.rows()
    }

    pub fn feature_dim(&self) -> usize {
        self.matrix.cols()
    }
}
