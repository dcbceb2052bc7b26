//! Serde shapes of workspace documents. Every document carries a `kind`
//! tag; references to other documents are by name.

use std::collections::BTreeMap;

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Morphism {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackDecl {
    pub f: String,
    pub g: String,
    pub apex: String,
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDecl {
    pub a: String,
    pub b: String,
    pub apex: String,
    pub first: String,
    pub second: String,
}

/// Explicit tables, a preorder (`order`), or the free category on a DAG
/// of `morphisms` (`free`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Category {
    pub kind: String,
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<Morphism>,
    pub identities: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub pullbacks: Vec<PullbackDecl>,
    #[serde(default)]
    pub products: Vec<ProductDecl>,
    pub order: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub free: bool,
    #[serde(default)]
    pub meets: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Partition {
    pub kind: String,
    pub category: String,
    pub blocks: Vec<Vec<String>>,
}

/// A ZObject given inline as `[object, coefficient]` pairs or by name.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ZRef {
    Name(String),
    Inline(Vec<(String, i64)>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZObject {
    pub kind: String,
    pub category: String,
    pub components: Vec<(String, i64)>,
}

/// Terms are `[i, j, coefficient, arrow]` with 1-based component indices.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZMorphism {
    pub kind: String,
    pub category: String,
    pub source: ZRef,
    pub target: ZRef,
    pub terms: Vec<(u32, u32, i64, String)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Covering {
    pub kind: String,
    pub category: String,
    #[serde(default)]
    pub families: BTreeMap<String, Vec<Vec<String>>>,
    /// Elements per object; adds every jointly covering family.
    pub joint: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub identities: bool,
    #[serde(default)]
    pub generate: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Selection {
    Keyword(String),
    List(Vec<String>),
}

impl Default for Selection {
    fn default() -> Self {
        Selection::List(Vec::new())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pointed {
    pub kind: String,
    pub category: String,
    pub points: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<usize>>,
    /// Send each point to the target point with the same label.
    #[serde(default)]
    pub by_label: bool,
    /// Residue-preserving points per morphism; all points when absent.
    #[serde(default)]
    pub residue: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub etale: Selection,
    #[serde(default)]
    pub open: Selection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Presheaf {
    pub kind: String,
    pub category: String,
    pub sections: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<usize>>,
    pub representable: Option<String>,
    pub constant: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub kind: String,
    pub category: String,
    pub preset: Option<String>,
    #[serde(default)]
    pub weq: Vec<String>,
    #[serde(default)]
    pub cof: Vec<String>,
    #[serde(default)]
    pub fib: Vec<String>,
}

/// Unlisted identities map to identities.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Functor {
    pub kind: String,
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fingerprints {
    pub kind: String,
    pub category: String,
    pub dims: BTreeMap<String, Vec<u64>>,
}

/// `membership[n]` sends level `n+1` objects to level `n` objects.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layered {
    pub kind: String,
    pub levels: Vec<String>,
    pub membership: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDecl {
    pub wv: String,
    pub wu: String,
    pub ux: String,
    pub vx: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZComposeCheck {
    pub kind: String,
    /// Morphisms in application order: the result is `last ∘ … ∘ first`.
    pub chain: Vec<String>,
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyCheck {
    pub kind: String,
    pub covering: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NisnevichCheck {
    pub kind: String,
    pub pointed: String,
    pub object: ZRef,
    pub family: Vec<String>,
    #[serde(default)]
    pub lemma: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareCheck {
    pub kind: String,
    pub pointed: String,
    pub square: SquareDecl,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoweredCheck {
    pub kind: String,
    pub layered: String,
    pub coverings: Vec<String>,
    /// Ladders as one arrow label per level.
    #[serde(default)]
    pub cover: Vec<Vec<String>>,
    #[serde(default)]
    pub family: Vec<Vec<String>>,
    /// Test ladders for base change; every ladder into the family's target when empty.
    #[serde(default)]
    pub tests: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaCheck {
    pub kind: String,
    pub partition: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlurryCheck {
    pub kind: String,
    pub covering: String,
    pub partition: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlurryLevel {
    pub covering: String,
    pub partition: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoweredBlurryCheck {
    pub kind: String,
    pub layered: String,
    pub levels: Vec<BlurryLevel>,
    #[serde(default)]
    pub loose: Vec<usize>,
    /// Base ladders to classify and check; every ladder when empty.
    #[serde(default)]
    pub ladders: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafCheck {
    pub kind: String,
    pub covering: String,
    #[serde(default)]
    pub presheaves: Vec<String>,
    /// Also check every presheaf with at most this many sections per object.
    pub enumerate: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearPresheaf {
    pub representable: Option<ZRef>,
    pub constant: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdditivityCheck {
    pub kind: String,
    pub category: String,
    /// Generating objects; their summands are added.
    pub objects: Vec<ZRef>,
    pub presheaf: LinearPresheaf,
    pub at: ZRef,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquaresProbeCheck {
    pub kind: String,
    pub covering: String,
    pub squares: Vec<SquareDecl>,
    #[serde(default)]
    pub presheaves: Vec<String>,
    pub enumerate: Option<usize>,
    #[serde(default)]
    pub asserted: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParametrizeCheck {
    pub kind: String,
    pub source: String,
    pub model: String,
    /// Functors applied by precomposition, innermost last.
    #[serde(default)]
    pub precompose: Vec<String>,
    pub expect_count: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelCheck {
    pub kind: String,
    pub model: String,
    #[serde(default)]
    pub lifting: bool,
    pub quotient: Option<String>,
    /// Object pairs `[A, B]` whose blocks are typed under `quotient`.
    #[serde(default)]
    pub class_types: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceCheck {
    pub kind: String,
    pub fingerprints: String,
    pub objects: Vec<ZRef>,
    /// `[i, j, equivalent]` over indices into `objects`.
    #[serde(default)]
    pub expect: Vec<(usize, usize, bool)>,
}

#[derive(Debug, Clone)]
pub enum Document {
    Category(Category),
    Partition(Partition),
    ZObject(ZObject),
    ZMorphism(ZMorphism),
    Covering(Covering),
    Pointed(Pointed),
    Presheaf(Presheaf),
    Model(Model),
    Functor(Functor),
    Fingerprints(Fingerprints),
    Layered(Layered),
    ZCompose(ZComposeCheck),
    Topology(TopologyCheck),
    Nisnevich(NisnevichCheck),
    Square(SquareCheck),
    Powered(PoweredCheck),
    Gamma(GammaCheck),
    Blurry(BlurryCheck),
    PoweredBlurry(PoweredBlurryCheck),
    Sheaf(SheafCheck),
    Additivity(AdditivityCheck),
    SquaresProbe(SquaresProbeCheck),
    Parametrize(ParametrizeCheck),
    ModelCheck(ModelCheck),
    Equivalence(EquivalenceCheck),
}

pub const KINDS: &[&str] = &[
    "category",
    "partition",
    "zobject",
    "zmorphism",
    "covering",
    "pointed",
    "presheaf",
    "model",
    "functor",
    "fingerprints",
    "layered",
    "z_compose",
    "topology",
    "nisnevich",
    "square",
    "powered",
    "gamma",
    "blurry",
    "powered_blurry",
    "sheaf",
    "additivity",
    "squares_probe",
    "parametrize",
    "model_check",
    "equivalence",
];

impl Document {
    pub fn kind(&self) -> &str {
        match self {
            Document::Category(d) => &d.kind,
            Document::Partition(d) => &d.kind,
            Document::ZObject(d) => &d.kind,
            Document::ZMorphism(d) => &d.kind,
            Document::Covering(d) => &d.kind,
            Document::Pointed(d) => &d.kind,
            Document::Presheaf(d) => &d.kind,
            Document::Model(d) => &d.kind,
            Document::Functor(d) => &d.kind,
            Document::Fingerprints(d) => &d.kind,
            Document::Layered(d) => &d.kind,
            Document::ZCompose(d) => &d.kind,
            Document::Topology(d) => &d.kind,
            Document::Nisnevich(d) => &d.kind,
            Document::Square(d) => &d.kind,
            Document::Powered(d) => &d.kind,
            Document::Gamma(d) => &d.kind,
            Document::Blurry(d) => &d.kind,
            Document::PoweredBlurry(d) => &d.kind,
            Document::Sheaf(d) => &d.kind,
            Document::Additivity(d) => &d.kind,
            Document::SquaresProbe(d) => &d.kind,
            Document::Parametrize(d) => &d.kind,
            Document::ModelCheck(d) => &d.kind,
            Document::Equivalence(d) => &d.kind,
        }
    }
}
