use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid expression: {0}")]
    InvalidExpr(String),

    #[error("join rule inapplicable: join node has {0} operands other than K1")]
    JoinRuleInapplicable(usize),

    #[error("explicit graph leaf `{0}` has no closed-form bound; use the search instead")]
    ExplicitLeaf(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("region is not incidence-closed: edge {0}-{1} is missing an endpoint")]
    NotIncidenceClosed(String, String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("regions belong to different spaces")]
    MixedSpaces,

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("insufficient points: need {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("hypothesis violated: no two points of {{{}}} share a component of their hull", .0.join(","))]
    HypothesisViolated(Vec<String>),

    #[error("not an embedding: {0}")]
    NotAnEmbedding(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
