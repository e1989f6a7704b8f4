use super::instance::Hyperedge;
use super::{MsscError, MsscInstance, Ordering};

/// Fills every hyperedge up to exactly `c` vertices with fresh dummies, each
/// belonging to that hyperedge only. Real vertices keep their ids; dummies
/// are numbered after them.
pub fn pad_to_uniform(inst: &MsscInstance, c: usize) -> Result<MsscInstance, MsscError> {
    let max = inst.uniformity();
    if c < max || c == 0 {
        return Err(MsscError::BadUniformity { c, max });
    }
    let mut labels = inst.labels().to_vec();
    let mut dummy: Vec<bool> = (0..inst.vertex_count()).map(|v| inst.is_dummy(v)).collect();
    let mut edges = Vec::with_capacity(inst.edges().len());
    for (i, e) in inst.edges().iter().enumerate() {
        let mut vertices = e.vertices.clone();
        for j in 0..c - vertices.len() {
            vertices.push(labels.len());
            labels.push(format!("~{}.{}", i, j + 1));
            dummy.push(true);
        }
        edges.push(Hyperedge {
            vertices,
            weight: e.weight,
        });
    }
    Ok(MsscInstance::from_parts(labels, edges, dummy))
}

/// Turns an ordering of a padded instance into one of the real vertices.
///
/// A dummy whose hyperedge is still uncovered trades places with the
/// earliest later real vertex of that hyperedge; then all dummies are
/// dropped. No cover time increases, so the result costs at most what the
/// padded ordering does. The returned ordering is evaluated on
/// [`MsscInstance::without_dummies`].
pub fn strip_dummies(padded: &MsscInstance, order: &[usize]) -> Result<Ordering, MsscError> {
    padded.evaluate(order)?;
    let inc = padded.incidence();
    let n = padded.vertex_count();
    let mut seq = order.to_vec();
    let mut covered = vec![false; padded.edges().len()];
    for i in 0..seq.len() {
        let v = seq[i];
        if padded.is_dummy(v) {
            let Some(&e) = inc[v].first() else { continue };
            if covered[e] {
                continue;
            }
            let members = &padded.edges()[e].vertices;
            if let Some(j) =
                (i + 1..seq.len()).find(|&j| !padded.is_dummy(seq[j]) && members.contains(&seq[j]))
            {
                seq.swap(i, j);
            } else {
                continue;
            }
        }
        for &e in &inc[seq[i]] {
            covered[e] = true;
        }
    }

    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if !padded.is_dummy(v) {
            remap[v] = next;
            next += 1;
        }
    }
    let real: Vec<usize> = seq
        .iter()
        .filter(|&&v| !padded.is_dummy(v))
        .map(|&v| remap[v])
        .collect();
    padded.without_dummies().evaluate(&real)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pads_singleton() {
        let inst = MsscInstance::new(1, vec![(vec![0], 1.0)]).unwrap();
        let p = pad_to_uniform(&inst, 3).unwrap();
        assert_eq!(p.vertex_count(), 3);
        assert_eq!(p.edges()[0].vertices, vec![0, 1, 2]);
        assert!(p.is_dummy(1) && p.is_dummy(2) && !p.is_dummy(0));
        assert_eq!(p.without_dummies(), inst);
    }

    #[test]
    fn uniform_instance_unchanged() {
        let inst = MsscInstance::new(3, vec![(vec![0, 1], 1.0), (vec![1, 2], 2.0)]).unwrap();
        assert_eq!(pad_to_uniform(&inst, 2).unwrap(), inst);
        assert!(matches!(
            pad_to_uniform(&inst, 1),
            Err(MsscError::BadUniformity { c: 1, max: 2 })
        ));
    }

    #[test]
    fn stripping_never_costs_more() {
        // {a,d} and {b,d2}; dummies first
        let inst = MsscInstance::new(2, vec![(vec![0], 1.0), (vec![1], 1.0)]).unwrap();
        let p = pad_to_uniform(&inst, 2).unwrap();
        let tau = [2, 1, 0, 3];
        let padded = p.evaluate(&tau).unwrap();
        let stripped = strip_dummies(&p, &tau).unwrap();
        assert_eq!(padded.objective, 3.0);
        assert_eq!(stripped.order, vec![0, 1]);
        assert_eq!(stripped.objective, 3.0);
    }
}
