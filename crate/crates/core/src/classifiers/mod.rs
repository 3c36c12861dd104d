//! Ten binary classifiers behind one fit / score contract.
//!
//! Every model maps a feature matrix to a score in `[0, 1]` per row, the
//! estimated probability of class 1. Hyperparameters are looked up by name
//! from a [`ClassifierSpec`]; unknown names and out-of-range values are
//! rejected when they are set.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::Matrix;

pub mod adaboost;
pub mod forest;
pub mod gboost;
pub mod knn;
pub mod lda;
pub mod logistic;
pub mod naive_bayes;
pub mod neural_net;
pub mod svm;
pub mod tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClassifierKind {
    NeuralNet,
    Lda,
    SvmLinear,
    RandomForest,
    GradientBoosting,
    AdaBoost,
    DecisionTree,
    Knn,
    Logistic,
    NaiveBayes,
}

struct Hyper {
    name: &'static str,
    default: f64,
    min: f64,
    max: f64,
    integer: bool,
}

const fn real(name: &'static str, default: f64, min: f64, max: f64) -> Hyper {
    Hyper { name, default, min, max, integer: false }
}

const fn int(name: &'static str, default: f64, min: f64, max: f64) -> Hyper {
    Hyper { name, default, min, max, integer: true }
}

const LOGISTIC: &[Hyper] = &[real("learning_rate", 0.1, 1e-12, 1e3), int("epochs", 1000.0, 1.0, 1e7)];
const NEURAL_NET: &[Hyper] = &[
    int("hidden", 16.0, 1.0, 4096.0),
    real("learning_rate", 0.01, 1e-12, 1e3),
    int("epochs", 500.0, 1.0, 1e7),
];
const LDA: &[Hyper] = &[real("ridge", 1e-6, 0.0, 1e6)];
const NAIVE_BAYES: &[Hyper] = &[real("var_floor", 1e-9, 1e-300, 1e6), real("laplace", 1.0, 0.0, 1e6)];
const DECISION_TREE: &[Hyper] = &[int("max_depth", 5.0, 0.0, 1e4), int("min_samples_split", 2.0, 2.0, 1e9)];
const RANDOM_FOREST: &[Hyper] = &[
    int("n_trees", 100.0, 1.0, 1e5),
    int("max_depth", 0.0, 0.0, 1e4),
    int("min_samples_split", 2.0, 2.0, 1e9),
    int("max_features", 0.0, 0.0, 1e6),
    int("bootstrap", 1.0, 0.0, 1.0),
];
const GRADIENT_BOOSTING: &[Hyper] = &[
    int("n_trees", 100.0, 1.0, 1e5),
    int("max_depth", 3.0, 1.0, 1e4),
    real("learning_rate", 0.1, 1e-12, 1e3),
    int("min_samples_split", 2.0, 2.0, 1e9),
];
const ADABOOST: &[Hyper] = &[int("n_rounds", 50.0, 1.0, 1e5)];
const KNN: &[Hyper] = &[int("k", 5.0, 1.0, 1e9)];
const SVM_LINEAR: &[Hyper] = &[
    real("lambda", 0.01, 0.0, 1e6),
    real("learning_rate", 0.1, 1e-12, 1e3),
    int("epochs", 1000.0, 1.0, 1e7),
];

impl ClassifierKind {
    /// Default roster order used by the harness.
    pub const ALL: [ClassifierKind; 10] = [
        ClassifierKind::NeuralNet,
        ClassifierKind::Lda,
        ClassifierKind::SvmLinear,
        ClassifierKind::RandomForest,
        ClassifierKind::GradientBoosting,
        ClassifierKind::AdaBoost,
        ClassifierKind::DecisionTree,
        ClassifierKind::Knn,
        ClassifierKind::Logistic,
        ClassifierKind::NaiveBayes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::NeuralNet => "neural_net",
            ClassifierKind::Lda => "lda",
            ClassifierKind::SvmLinear => "svm_linear",
            ClassifierKind::RandomForest => "random_forest",
            ClassifierKind::GradientBoosting => "gradient_boosting",
            ClassifierKind::AdaBoost => "adaboost",
            ClassifierKind::DecisionTree => "decision_tree",
            ClassifierKind::Knn => "knn",
            ClassifierKind::Logistic => "logistic",
            ClassifierKind::NaiveBayes => "naive_bayes",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ClassifierKind::NeuralNet => "Neural Network",
            ClassifierKind::Lda => "Linear DA",
            ClassifierKind::SvmLinear => "Linear SVM",
            ClassifierKind::RandomForest => "Random Forest",
            ClassifierKind::GradientBoosting => "Gradient Boosting",
            ClassifierKind::AdaBoost => "AdaBoost",
            ClassifierKind::DecisionTree => "Decision Tree",
            ClassifierKind::Knn => "Nearest Neighbors",
            ClassifierKind::Logistic => "Logistic Regression",
            ClassifierKind::NaiveBayes => "Naive Bayes",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        ClassifierKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    fn hypers(self) -> &'static [Hyper] {
        match self {
            ClassifierKind::NeuralNet => NEURAL_NET,
            ClassifierKind::Lda => LDA,
            ClassifierKind::SvmLinear => SVM_LINEAR,
            ClassifierKind::RandomForest => RANDOM_FOREST,
            ClassifierKind::GradientBoosting => GRADIENT_BOOSTING,
            ClassifierKind::AdaBoost => ADABOOST,
            ClassifierKind::DecisionTree => DECISION_TREE,
            ClassifierKind::Knn => KNN,
            ClassifierKind::Logistic => LOGISTIC,
            ClassifierKind::NaiveBayes => NAIVE_BAYES,
        }
    }

    /// Recognised hyperparameter names.
    pub fn hyperparameter_names(self) -> impl Iterator<Item = &'static str> {
        self.hypers().iter().map(|h| h.name)
    }

    pub fn default_one_hot(self) -> bool {
        matches!(
            self,
            ClassifierKind::Logistic
                | ClassifierKind::Lda
                | ClassifierKind::SvmLinear
                | ClassifierKind::NeuralNet
        )
    }

    /// Whether fitting accepts a target with a single class.
    pub fn tolerates_single_class(self) -> bool {
        matches!(
            self,
            ClassifierKind::NaiveBayes
                | ClassifierKind::DecisionTree
                | ClassifierKind::Knn
                | ClassifierKind::RandomForest
        )
    }
}

impl core::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifierError {
    #[error("{kind} has no hyperparameter {name:?}")]
    UnknownHyperparameter { kind: ClassifierKind, name: String },
    #[error("{kind}.{name} = {value} is outside [{min}, {max}]{}", if *.integer { " or not an integer" } else { "" })]
    HyperparameterRange {
        kind: ClassifierKind,
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
        integer: bool,
    },
    #[error("matrix has {found} columns, model expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{rows} rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("training set is empty")]
    Empty,
    #[error("label {0} is not binary")]
    NonBinaryLabel(u8),
    #[error("{0} needs both classes in the training labels")]
    SingleClass(ClassifierKind),
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("{0}")]
    Numerical(&'static str),
}

/// Model kind plus named hyperparameters and the one-hot flag.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    hyperparameters: BTreeMap<String, f64>,
    pub one_hot: bool,
}

impl ClassifierSpec {
    /// Spec with every hyperparameter at its default.
    pub fn new(kind: ClassifierKind) -> Self {
        ClassifierSpec {
            kind,
            hyperparameters: kind.hypers().iter().map(|h| (h.name.into(), h.default)).collect(),
            one_hot: kind.default_one_hot(),
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ClassifierError> {
        let h = self
            .kind
            .hypers()
            .iter()
            .find(|h| h.name == name)
            .ok_or_else(|| ClassifierError::UnknownHyperparameter {
                kind: self.kind,
                name: name.into(),
            })?;
        let integral = crate::math::round(value) == value;
        if !(value >= h.min && value <= h.max) || (h.integer && !integral) {
            return Err(ClassifierError::HyperparameterRange {
                kind: self.kind,
                name: h.name,
                value,
                min: h.min,
                max: h.max,
                integer: h.integer,
            });
        }
        self.hyperparameters.insert(h.name.into(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self, ClassifierError> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn with_one_hot(mut self, one_hot: bool) -> Self {
        self.one_hot = one_hot;
        self
    }

    /// Value of a recognised hyperparameter.
    pub fn get(&self, name: &str) -> f64 {
        match self.hyperparameters.get(name) {
            Some(&v) => v,
            None => panic!("{} has no hyperparameter {name:?}", self.kind),
        }
    }

    fn get_usize(&self, name: &str) -> usize {
        self.get(name) as usize
    }

    pub fn hyperparameters(&self) -> &BTreeMap<String, f64> {
        &self.hyperparameters
    }
}

/// Probability of class 1 for each row.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PredictionScores(Vec<f64>);

impl PredictionScores {
    pub fn new(scores: Vec<f64>) -> Option<Self> {
        if scores.iter().all(|s| (0.0..=1.0).contains(s)) {
            Some(PredictionScores(scores))
        } else {
            None
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Facts about the fit itself, for reporting.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainingMeta {
    pub epochs: Option<usize>,
    pub final_loss: Option<f64>,
    /// Trees or boosting rounds actually kept.
    pub members: Option<usize>,
}

#[derive(Debug, Clone)]
enum Params {
    Logistic(logistic::LogisticModel),
    NeuralNet(neural_net::MlpModel),
    Lda(lda::LdaModel),
    NaiveBayes(naive_bayes::NaiveBayesModel),
    Tree(tree::Tree),
    Forest(forest::ForestModel),
    Boosting(gboost::BoostingModel),
    AdaBoost(adaboost::AdaBoostModel),
    Knn(knn::KnnModel),
    Svm(svm::SvmModel),
}

/// A fitted model. Immutable; scoring is re-entrant.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    kind: ClassifierKind,
    feature_count: usize,
    params: Params,
    meta: TrainingMeta,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        self.kind
    }

    pub fn feature_count(&self) -> usize {
        self.feature_count
    }

    pub fn meta(&self) -> &TrainingMeta {
        &self.meta
    }

    fn score_row(&self, row: &[f64]) -> f64 {
        match &self.params {
            Params::Logistic(m) => m.score(row),
            Params::NeuralNet(m) => m.score(row),
            Params::Lda(m) => m.score(row),
            Params::NaiveBayes(m) => m.score(row),
            Params::Tree(t) => t.predict_row(row),
            Params::Forest(m) => m.score(row),
            Params::Boosting(m) => m.score(row),
            Params::AdaBoost(m) => m.score(row),
            Params::Knn(m) => m.score(row),
            Params::Svm(m) => m.score(row),
        }
    }
}

fn check_training(x: &Matrix, y: &[u8]) -> Result<[usize; 2], ClassifierError> {
    if x.rows() != y.len() {
        return Err(ClassifierError::LengthMismatch { rows: x.rows(), labels: y.len() });
    }
    if y.is_empty() {
        return Err(ClassifierError::Empty);
    }
    if let Some(&l) = y.iter().find(|&&l| l > 1) {
        return Err(ClassifierError::NonBinaryLabel(l));
    }
    if !x.all_finite() {
        return Err(ClassifierError::NonFinite);
    }
    let pos = y.iter().filter(|&&l| l == 1).count();
    Ok([y.len() - pos, pos])
}

/// Fits a model. Randomised kinds draw only from a generator seeded with `seed`.
pub fn fit(spec: &ClassifierSpec, x: &Matrix, y: &[u8], seed: u64) -> Result<TrainedModel, ClassifierError> {
    let counts = check_training(x, y)?;
    if (counts[0] == 0 || counts[1] == 0) && !spec.kind.tolerates_single_class() {
        return Err(ClassifierError::SingleClass(spec.kind));
    }
    let mut meta = TrainingMeta::default();
    let params = match spec.kind {
        ClassifierKind::Logistic => {
            let (m, loss) = logistic::fit(
                x,
                y,
                spec.get("learning_rate"),
                spec.get_usize("epochs"),
            );
            meta.epochs = Some(spec.get_usize("epochs"));
            meta.final_loss = Some(loss);
            Params::Logistic(m)
        }
        ClassifierKind::NeuralNet => {
            let (m, loss) = neural_net::fit(
                x,
                y,
                spec.get_usize("hidden"),
                spec.get("learning_rate"),
                spec.get_usize("epochs"),
                seed,
            );
            meta.epochs = Some(spec.get_usize("epochs"));
            meta.final_loss = Some(loss);
            Params::NeuralNet(m)
        }
        ClassifierKind::Lda => Params::Lda(lda::fit(x, y, spec.get("ridge"))?),
        ClassifierKind::NaiveBayes => {
            Params::NaiveBayes(naive_bayes::fit(x, y, spec.get("var_floor"), spec.get("laplace")))
        }
        ClassifierKind::DecisionTree => {
            let params = tree::TreeParams {
                max_depth: depth_limit(spec.get_usize("max_depth")),
                min_samples_split: spec.get_usize("min_samples_split"),
                max_features: None,
            };
            Params::Tree(tree::fit_classifier(x, y, &params))
        }
        ClassifierKind::RandomForest => {
            let d = x.cols();
            let mf = spec.get_usize("max_features");
            let m = forest::fit(
                x,
                y,
                &forest::ForestParams {
                    n_trees: spec.get_usize("n_trees"),
                    bootstrap: spec.get("bootstrap") != 0.0,
                    tree: tree::TreeParams {
                        max_depth: depth_limit(spec.get_usize("max_depth")),
                        min_samples_split: spec.get_usize("min_samples_split"),
                        max_features: Some(if mf == 0 { forest::sqrt_features(d) } else { mf.min(d) }),
                    },
                },
                seed,
            );
            meta.members = Some(spec.get_usize("n_trees"));
            Params::Forest(m)
        }
        ClassifierKind::GradientBoosting => {
            let (m, loss) = gboost::fit(
                x,
                y,
                spec.get_usize("n_trees"),
                spec.get("learning_rate"),
                &tree::TreeParams {
                    max_depth: Some(spec.get_usize("max_depth")),
                    min_samples_split: spec.get_usize("min_samples_split"),
                    max_features: None,
                },
            );
            meta.members = Some(spec.get_usize("n_trees"));
            meta.final_loss = Some(loss);
            Params::Boosting(m)
        }
        ClassifierKind::AdaBoost => {
            let (m, _) = adaboost::boost(x, y, spec.get_usize("n_rounds"));
            meta.members = Some(m.len());
            Params::AdaBoost(m)
        }
        ClassifierKind::Knn => Params::Knn(knn::fit(x, y, spec.get_usize("k"))),
        ClassifierKind::SvmLinear => {
            let (m, loss) = svm::fit(
                x,
                y,
                spec.get("lambda"),
                spec.get("learning_rate"),
                spec.get_usize("epochs"),
            );
            meta.epochs = Some(spec.get_usize("epochs"));
            meta.final_loss = Some(loss);
            Params::Svm(m)
        }
    };
    Ok(TrainedModel { kind: spec.kind, feature_count: x.cols(), params, meta })
}

fn depth_limit(max_depth: usize) -> Option<usize> {
    if max_depth == 0 {
        None
    } else {
        Some(max_depth)
    }
}

pub fn predict_proba(model: &TrainedModel, x: &Matrix) -> Result<PredictionScores, ClassifierError> {
    if x.cols() != model.feature_count {
        return Err(ClassifierError::DimensionMismatch {
            expected: model.feature_count,
            found: x.cols(),
        });
    }
    if !x.all_finite() {
        return Err(ClassifierError::NonFinite);
    }
    let scores: Vec<f64> = x.iter_rows().map(|r| model.score_row(r).clamp(0.0, 1.0)).collect();
    if scores.iter().any(|s| s.is_nan()) {
        return Err(ClassifierError::Numerical("model produced a NaN score"));
    }
    Ok(PredictionScores(scores))
}

/// Label 1 iff the score reaches `threshold`.
pub fn predict_label(scores: &PredictionScores, threshold: f64) -> Vec<u8> {
    scores.0.iter().map(|&s| u8::from(s >= threshold)).collect()
}

/// A differentiable training loss over a flat parameter vector.
pub trait Objective {
    fn dim(&self) -> usize;
    fn loss(&self, params: &[f64]) -> f64;
    fn gradient(&self, params: &[f64]) -> Vec<f64>;
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line() -> (Matrix, Vec<u8>) {
        (Matrix::column_vector(&[-2.0, -1.0, 1.0, 2.0]), vec![0, 0, 1, 1])
    }

    fn accuracy(spec: &ClassifierSpec, x: &Matrix, y: &[u8]) -> f64 {
        let m = fit(spec, x, y, 7).unwrap();
        let p = predict_label(&predict_proba(&m, x).unwrap(), 0.5);
        p.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64
    }

    #[test]
    fn separable_line_fits_exactly() {
        let (x, y) = line();
        for kind in [ClassifierKind::Logistic, ClassifierKind::Lda, ClassifierKind::DecisionTree] {
            assert_eq!(accuracy(&ClassifierSpec::new(kind), &x, &y), 1.0, "{kind}");
        }
        let knn1 = ClassifierSpec::new(ClassifierKind::Knn).with("k", 1.0).unwrap();
        assert_eq!(accuracy(&knn1, &x, &y), 1.0);
    }

    #[test]
    fn every_kind_scores_in_unit_interval() {
        let (x, y) = line();
        for kind in ClassifierKind::ALL {
            let m = fit(&ClassifierSpec::new(kind), &x, &y, 3).unwrap();
            let s = predict_proba(&m, &x).unwrap();
            assert!(s.as_slice().iter().all(|v| (0.0..=1.0).contains(v)), "{kind}");
        }
    }

    #[test]
    fn hyperparameter_validation() {
        let mut s = ClassifierSpec::new(ClassifierKind::Knn);
        assert!(s.set("k", 3.0).is_ok());
        assert!(matches!(s.set("k", 2.5), Err(ClassifierError::HyperparameterRange { .. })));
        assert!(matches!(s.set("depth", 2.0), Err(ClassifierError::UnknownHyperparameter { .. })));
        assert_eq!(s.get("k"), 3.0);
    }

    #[test]
    fn single_class_policy() {
        let x = Matrix::column_vector(&[1.0, 2.0, 3.0]);
        let y = [1, 1, 1];
        assert_eq!(
            fit(&ClassifierSpec::new(ClassifierKind::Logistic), &x, &y, 0).unwrap_err(),
            ClassifierError::SingleClass(ClassifierKind::Logistic)
        );
        let nb = fit(&ClassifierSpec::new(ClassifierKind::NaiveBayes), &x, &y, 0).unwrap();
        assert_eq!(predict_proba(&nb, &x).unwrap().as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn threshold_is_inclusive() {
        let s = PredictionScores::new(vec![0.2, 0.5, 0.9]).unwrap();
        assert_eq!(predict_label(&s, 0.5), vec![0, 1, 1]);
        assert_eq!(predict_label(&s, 0.0), vec![1, 1, 1]);
        let s = PredictionScores::new(vec![0.999]).unwrap();
        assert_eq!(predict_label(&s, 1.0), vec![0]);
    }

    #[test]
    fn dimension_checked_at_predict() {
        let (x, y) = line();
        let m = fit(&ClassifierSpec::new(ClassifierKind::Knn), &x, &y, 0).unwrap();
        let wide = Matrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert_eq!(
            predict_proba(&m, &wide),
            Err(ClassifierError::DimensionMismatch { expected: 1, found: 2 })
        );
    }
}
