//! Small model builders shared by tests across modules.

use crate::model::{
    CallRef, ClassDecl, ClassId, ClassModel, MethodDecl, ModelKind, Visibility,
};

pub(crate) fn method(name: &str, calls: &[(&str, &str)]) -> MethodDecl {
    MethodDecl {
        name: name.into(),
        visibility: Visibility::Public,
        params: Vec::new(),
        calls: calls
            .iter()
            .map(|&(class, method)| CallRef {
                class: ClassId::new(class),
                method: method.into(),
            })
            .collect(),
        accesses: Vec::new(),
        instantiates: Vec::new(),
    }
}

pub(crate) fn class(id: &str, methods: Vec<MethodDecl>) -> ClassDecl {
    let package = id.rsplit_once('.').map(|(p, _)| p).unwrap_or("").to_string();
    ClassDecl {
        id: ClassId::new(id),
        package,
        attributes: Vec::new(),
        methods,
        extends: Vec::new(),
        implements: Vec::new(),
    }
}

pub(crate) fn client(name: &str, classes: Vec<ClassDecl>) -> ClassModel {
    ClassModel {
        name: name.into(),
        kind: ModelKind::Client,
        classes,
    }
}

pub(crate) fn tiny_api() -> ClassModel {
    crate::model::load_model(&crate::model::fixture_path("tiny_api.json")).unwrap()
}
