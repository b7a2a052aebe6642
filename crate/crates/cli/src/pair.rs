//! Pair files: a map for φ, a map for φ⁻¹ and the translations between them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use freetrack::dsl::parse_map_file;
use freetrack::dynamics::{AutomorphismPair, Translation};
use freetrack::graph::Graph;
use freetrack::tt::TrainTrack;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub forward: PathBuf,
    pub backward: PathBuf,
    #[serde(default)]
    pub translation: TranslationSpec,
    pub radius: Option<usize>,
    pub tol: Option<f64>,
    pub dedup_tol: Option<f64>,
    pub u_tol: Option<f64>,
    pub v_tol: Option<f64>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TranslationSpec {
    /// `"identity-rose"`.
    Named(String),
    /// Images of the positive edges of each graph in the other.
    Explicit { forward: BTreeMap<String, String>, backward: BTreeMap<String, String> },
}

impl Default for TranslationSpec {
    fn default() -> Self {
        TranslationSpec::Named("identity-rose".into())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_track(path: &Path, max_power: usize) -> Result<TrainTrack, CliError> {
    let m = parse_map_file(&read(path)?).map_err(|e| CliError::in_file(path, e))?;
    Ok(TrainTrack::new(m.map, max_power)?)
}

fn translation(source: &Graph, target: &Graph, images: &BTreeMap<String, String>) -> Result<Translation, CliError> {
    let mut imgs = Vec::new();
    for e in source.positive_edges() {
        let name = source.edge_name(e);
        let img = images.get(&name).ok_or_else(|| CliError::Usage(format!("translation has no image for `{name}`")))?;
        imgs.push(target.parse_word(img)?);
    }
    Ok(Translation::new(source.clone(), target.clone(), imgs)?)
}

impl PairFile {
    pub fn load(path: &Path) -> Result<(PairFile, AutomorphismPair), CliError> {
        let p: PairFile = toml::from_str(&read(path)?).map_err(|e| CliError::Toml(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let fwd = load_track(&dir.join(&p.forward), 16)?;
        let bwd = load_track(&dir.join(&p.backward), 16)?;
        let pair = match &p.translation {
            TranslationSpec::Named(n) if n == "identity-rose" => {
                if !fwd.graph().is_rose() || fwd.graph() != bwd.graph() {
                    return Err(CliError::Usage("identity-rose needs both maps on the same rose".into()));
                }
                AutomorphismPair::on_rose(fwd, bwd)?
            }
            TranslationSpec::Named(n) => return Err(CliError::Usage(format!("unknown translation `{n}`"))),
            TranslationSpec::Explicit { forward, backward } => {
                let h = translation(fwd.graph(), bwd.graph(), forward)?;
                let h_back = translation(bwd.graph(), fwd.graph(), backward)?;
                AutomorphismPair::new(fwd, bwd, h, h_back)?
            }
        };
        Ok((p, pair))
    }
}
