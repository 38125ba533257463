use nlixy::embedstore::*;
use nlixy::EntailmentLabel;
use proptest::prelude::*;

fn record_strategy(dim: usize) -> impl Strategy<Value = EmbeddingRecord> {
    (
        "[a-z0-9:\\-]{1,20}",
        proptest::collection::vec(proptest::num::f32::NORMAL | proptest::num::f32::ZERO, dim),
        any::<bool>(),
    )
        .prop_map(|(id, vector, e)| EmbeddingRecord {
            example_id: id,
            vector,
            predicted_label: if e { EntailmentLabel::Entailment } else { EntailmentLabel::NonEntailment },
        })
}

fn store_strategy() -> impl Strategy<Value = EmbeddingStore> {
    (1usize..48, "[ -~]{0,30}").prop_flat_map(|(dim, model)| {
        proptest::collection::vec(record_strategy(dim), 0..40)
            .prop_map(move |records| EmbeddingStore::new(model.clone(), dim, records).unwrap())
    })
}

proptest! {
    #[test]
    fn encode_decode_round_trips(store in store_strategy()) {
        let bytes = encode(&store.header, &store.records).unwrap();
        let expected_len = store.header.encoded_len() + store.records.iter().map(|r| r.encoded_len()).sum::<usize>();
        prop_assert_eq!(bytes.len(), expected_len);
        prop_assert_eq!(decode(&bytes).unwrap(), store);
    }

    #[test]
    fn any_truncation_is_corrupt(store in store_strategy(), frac in 0.0f64..1.0) {
        let bytes = encode(&store.header, &store.records).unwrap();
        let cut = ((bytes.len() as f64) * frac) as usize;
        prop_assume!(cut < bytes.len());
        let err = decode(&bytes[..cut]).unwrap_err();
        prop_assert_eq!(err.code(), "CorruptStore");
    }
}

fn small_store() -> EmbeddingStore {
    let rec = |id: &str, v: f32| EmbeddingRecord {
        example_id: id.into(),
        vector: vec![v, -v, 0.25],
        predicted_label: EntailmentLabel::NonEntailment,
    };
    EmbeddingStore::new("toy", 3, vec![rec("c1:p1", 1.0), rec("c1:p2", 2.0)]).unwrap()
}

#[test]
fn file_round_trip_and_header_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.embstore");
    let store = small_store();
    store.write(&path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..8], b"NLIXYEMB");
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
    assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 3);
    assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 2);
    assert_eq!(u32::from_le_bytes(bytes[24..28].try_into().unwrap()), 3);
    assert_eq!(&bytes[28..31], b"toy");
    assert_eq!(read_store(&path).unwrap(), store);
}

#[test]
fn trailing_bytes_and_bad_labels_are_rejected() {
    let store = small_store();
    let mut bytes = encode(&store.header, &store.records).unwrap();
    bytes.push(0);
    assert_eq!(decode(&bytes).unwrap_err().code(), "CorruptStore");
    bytes.pop();
    *bytes.last_mut().unwrap() = 7;
    assert_eq!(decode(&bytes).unwrap_err().code(), "CorruptStore");
}

#[test]
fn wrong_vector_length_is_a_dimension_mismatch() {
    let bad =
        EmbeddingRecord { example_id: "a".into(), vector: vec![1.0; 4], predicted_label: EntailmentLabel::Entailment };
    let err = EmbeddingStore::new("m", 3, vec![bad]).unwrap_err();
    assert_eq!(err.code(), "DimensionMismatch");
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(read_store(dir.path().join("none.embstore")).unwrap_err().code(), "IoError");
}
