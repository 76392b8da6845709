use crate::dataset::ExampleDataset;
use crate::rng::{Domain, SeedStream};

use super::NGramError;

#[derive(Debug, Clone)]
pub struct CanarySpec {
    pub dataset: ExampleDataset,
    pub duplication: usize,
}

/// A background corpus plus canary datasets to inject whole, in canonical
/// order, `duplication` times each.
#[derive(Debug, Clone)]
pub struct CanaryPlan {
    pub background: Vec<String>,
    pub canaries: Vec<CanarySpec>,
    pub injection_seed: u64,
}

/// Interleaves canary blocks with the background at seeded positions.
///
/// Background documents keep their relative order; the slot sequence
/// (background or canary `c`) is a uniform shuffle.
pub fn build_contaminated_corpus(plan: &CanaryPlan) -> Result<Vec<String>, NGramError> {
    let mut blocks = Vec::with_capacity(plan.canaries.len());
    let mut slots: Vec<usize> = vec![0; plan.background.len()];
    for (c, canary) in plan.canaries.iter().enumerate() {
        if canary.dataset.is_empty() {
            return Err(NGramError::EmptyCanary(canary.dataset.name().to_string()));
        }
        if canary.duplication == 0 {
            return Err(NGramError::ZeroDuplication(canary.dataset.name().to_string()));
        }
        blocks.push(canary.dataset.canonical_seq());
        slots.extend(std::iter::repeat_n(c + 1, canary.duplication));
    }
    SeedStream::new(plan.injection_seed, Domain::Injection, 0, 0).shuffle(&mut slots);

    let mut background = plan.background.iter();
    Ok(slots
        .into_iter()
        .map(|slot| match slot {
            0 => background.next().expect("one slot per background document").clone(),
            c => blocks[c - 1].clone(),
        })
        .collect())
}
