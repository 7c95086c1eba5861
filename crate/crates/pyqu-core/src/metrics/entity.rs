//! Entity index: functions, classes, imports, and call sites extracted from
//! the parse tree.

use tree_sitter::{Node, Tree};

/// One parameter of a function definition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamInfo {
    pub name: String,
    pub has_annotation: bool,
    pub has_default: bool,
    /// `*args` / `**kwargs` style parameter.
    pub is_splat: bool,
}

/// One function or method definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionInfo {
    pub name: String,
    pub params: Vec<ParamInfo>,
    pub has_return_annotation: bool,
    pub has_docstring: bool,
    /// Byte span of the definition within the source text.
    pub body_span: (usize, usize),
    /// Defined directly in a class body.
    pub is_method: bool,
    /// Defined at module level (not nested in another entity).
    pub is_top_level: bool,
}

impl FunctionInfo {
    /// Minimum and maximum accepted argument counts. `None` for the maximum
    /// means unbounded (`*args` or `**kwargs` present).
    pub fn arity_range(&self) -> (usize, Option<usize>) {
        let has_splat = self.params.iter().any(|p| p.is_splat);
        let min = self
            .params
            .iter()
            .filter(|p| !p.is_splat && !p.has_default)
            .count();
        let max = if has_splat {
            None
        } else {
            Some(self.params.len())
        };
        (min, max)
    }
}

/// One class definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub name: String,
    /// Attribute names assigned on the instance receiver inside methods plus
    /// class-level assignment targets, de-duplicated and sorted.
    pub fields: Vec<String>,
    pub methods: Vec<String>,
    pub has_docstring: bool,
    pub body_span: (usize, usize),
    pub is_top_level: bool,
}

/// One import statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportInfo {
    /// Dotted module path (`torch.nn`); empty for a bare relative import.
    pub module: String,
    /// Names imported by a `from` import, or the bindings created by a plain
    /// import (first dotted component or alias).
    pub names: Vec<String>,
    pub is_relative: bool,
    /// Local names this statement binds.
    pub bound_names: Vec<String>,
}

/// One call expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSite {
    /// Dotted callee path when the callee is an identifier or attribute
    /// chain (`np.random.seed`); `None` for computed callees.
    pub callee_path: Option<String>,
    pub positional_args: usize,
    pub keyword_names: Vec<String>,
    /// Call uses `*args` / `**kwargs` splats.
    pub has_splat: bool,
    /// Call appears inside a `for` or `while` body.
    pub in_loop: bool,
    /// 1-based line of the call.
    pub line: usize,
}

impl CallSite {
    pub fn total_args(&self) -> usize {
        self.positional_args + self.keyword_names.len()
    }

    /// Leftmost component of the callee path.
    pub fn root(&self) -> Option<&str> {
        self.callee_path
            .as_deref()
            .and_then(|p| p.split('.').next())
    }

    /// Last component of the callee path.
    pub fn leaf(&self) -> Option<&str> {
        self.callee_path
            .as_deref()
            .and_then(|p| p.rsplit('.').next())
    }
}

/// Everything the structural metrics need, computed once per unit.
#[derive(Debug, Clone, Default)]
pub struct EntityIndex {
    pub functions: Vec<FunctionInfo>,
    pub classes: Vec<ClassInfo>,
    pub imports: Vec<ImportInfo>,
    pub call_sites: Vec<CallSite>,
    /// Module has a docstring.
    pub module_docstring: bool,
}

impl EntityIndex {
    pub fn from_tree(tree: &Tree, text: &str) -> EntityIndex {
        let mut index = EntityIndex {
            module_docstring: docstring_of(tree.root_node(), text).is_some(),
            ..EntityIndex::default()
        };
        collect(tree.root_node(), text, &mut index, 0, false);
        index
    }

    /// Local names bound by imports (aliases included).
    pub fn imported_bindings(&self) -> Vec<&str> {
        self.imports
            .iter()
            .flat_map(|i| i.bound_names.iter().map(String::as_str))
            .collect()
    }
}

fn collect(node: Node, text: &str, index: &mut EntityIndex, depth: usize, in_class: bool) {
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        match child.kind() {
            "function_definition" => {
                index.functions.push(function_info(child, text, in_class, depth == 0));
                descend_into_body(child, text, index);
            }
            "class_definition" => {
                index.classes.push(class_info(child, text, depth == 0));
                if let Some(body) = child.child_by_field_name("body") {
                    collect(body, text, index, depth + 1, true);
                }
            }
            "decorated_definition" => {
                // The inner definition keeps the outer nesting depth.
                collect(child, text, index, depth, in_class);
            }
            "import_statement" | "import_from_statement" => {
                index.imports.push(import_info(child, text));
            }
            "call" => {
                index.call_sites.push(call_site(child, text));
                collect(child, text, index, depth + 1, false);
            }
            _ => collect(child, text, index, depth + 1, in_class && is_transparent(child)),
        }
    }
}

// Nodes that keep class-body context when recursing (e.g. a method wrapped in
// an `if` at class level stays a method for indexing purposes is NOT
// supported; only decoration is transparent). Plain expressions lose it.
fn is_transparent(_node: Node) -> bool {
    false
}

fn descend_into_body(def: Node, text: &str, index: &mut EntityIndex) {
    if let Some(body) = def.child_by_field_name("body") {
        collect(body, text, index, 1, false);
    }
    // Parameters and return annotations can contain calls (default values).
    if let Some(params) = def.child_by_field_name("parameters") {
        collect(params, text, index, 1, false);
    }
}

fn node_text<'a>(node: Node, text: &'a str) -> &'a str {
    &text[node.byte_range()]
}

/// Docstring of a module / function-body / class-body node: the first
/// statement being a plain string expression.
pub(crate) fn docstring_of<'t>(body: Node<'t>, _text: &str) -> Option<Node<'t>> {
    let mut cursor = body.walk();
    for child in body.children(&mut cursor) {
        match child.kind() {
            "comment" => continue,
            "expression_statement" => {
                let e = child.named_child(0)?;
                return if e.kind() == "string" { Some(e) } else { None };
            }
            _ => return None,
        }
    }
    None
}

fn function_info(def: Node, text: &str, in_class: bool, top_level: bool) -> FunctionInfo {
    let name = def
        .child_by_field_name("name")
        .map(|n| node_text(n, text).to_string())
        .unwrap_or_default();
    let mut params = Vec::new();
    if let Some(plist) = def.child_by_field_name("parameters") {
        let mut cursor = plist.walk();
        for p in plist.named_children(&mut cursor) {
            let info = match p.kind() {
                "identifier" => ParamInfo {
                    name: node_text(p, text).to_string(),
                    ..ParamInfo::default()
                },
                "typed_parameter" => ParamInfo {
                    name: p
                        .named_child(0)
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default(),
                    has_annotation: true,
                    ..ParamInfo::default()
                },
                "default_parameter" => ParamInfo {
                    name: p
                        .child_by_field_name("name")
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default(),
                    has_default: true,
                    ..ParamInfo::default()
                },
                "typed_default_parameter" => ParamInfo {
                    name: p
                        .child_by_field_name("name")
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default(),
                    has_annotation: true,
                    has_default: true,
                    ..ParamInfo::default()
                },
                "list_splat_pattern" | "dictionary_splat_pattern" => ParamInfo {
                    name: node_text(p, text)
                        .trim_start_matches('*')
                        .to_string(),
                    is_splat: true,
                    ..ParamInfo::default()
                },
                // positional-only / keyword-only separators
                "positional_separator" | "keyword_separator" => continue,
                _ => continue,
            };
            params.push(info);
        }
    }
    let has_docstring = def
        .child_by_field_name("body")
        .and_then(|b| docstring_of(b, text))
        .is_some();
    FunctionInfo {
        name,
        params,
        has_return_annotation: def.child_by_field_name("return_type").is_some(),
        has_docstring,
        body_span: (def.start_byte(), def.end_byte()),
        is_method: in_class,
        is_top_level: top_level,
    }
}

fn class_info(def: Node, text: &str, top_level: bool) -> ClassInfo {
    let name = def
        .child_by_field_name("name")
        .map(|n| node_text(n, text).to_string())
        .unwrap_or_default();
    let mut fields: Vec<String> = Vec::new();
    let mut methods = Vec::new();
    let mut has_docstring = false;
    if let Some(body) = def.child_by_field_name("body") {
        has_docstring = docstring_of(body, text).is_some();
        let mut cursor = body.walk();
        for stmt in body.children(&mut cursor) {
            let method_def = match stmt.kind() {
                "function_definition" => Some(stmt),
                "decorated_definition" => stmt
                    .child_by_field_name("definition")
                    .filter(|d| d.kind() == "function_definition"),
                _ => None,
            };
            if let Some(m) = method_def {
                let mname = m
                    .child_by_field_name("name")
                    .map(|n| node_text(n, text).to_string())
                    .unwrap_or_default();
                let receiver = first_param_name(m, text);
                if let Some(mbody) = m.child_by_field_name("body") {
                    collect_receiver_fields(mbody, text, receiver.as_deref(), &mut fields);
                }
                methods.push(mname);
            } else if stmt.kind() == "expression_statement" {
                // class-level assignments define fields
                if let Some(assign) = stmt.named_child(0).filter(|n| n.kind() == "assignment") {
                    if let Some(left) = assign.child_by_field_name("left") {
                        if left.kind() == "identifier" {
                            fields.push(node_text(left, text).to_string());
                        }
                    }
                }
            }
        }
    }
    fields.sort();
    fields.dedup();
    ClassInfo {
        name,
        fields,
        methods,
        has_docstring,
        body_span: (def.start_byte(), def.end_byte()),
        is_top_level: top_level,
    }
}

pub(crate) fn first_param_name(def: Node, text: &str) -> Option<String> {
    let plist = def.child_by_field_name("parameters")?;
    let mut cursor = plist.walk();
    for p in plist.named_children(&mut cursor) {
        return match p.kind() {
            "identifier" => Some(node_text(p, text).to_string()),
            "typed_parameter" | "default_parameter" | "typed_default_parameter" => p
                .named_child(0)
                .map(|n| node_text(n, text).to_string()),
            _ => None,
        };
    }
    None
}

/// Collect `receiver.attr = ...` targets anywhere inside a method body.
fn collect_receiver_fields(node: Node, text: &str, receiver: Option<&str>, fields: &mut Vec<String>) {
    let Some(receiver) = receiver else { return };
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.kind() == "assignment" || child.kind() == "augmented_assignment" {
            if let Some(left) = child.child_by_field_name("left") {
                push_receiver_attr(left, text, receiver, fields);
            }
        }
        collect_receiver_fields(child, text, Some(receiver), fields);
    }
}

fn push_receiver_attr(target: Node, text: &str, receiver: &str, fields: &mut Vec<String>) {
    match target.kind() {
        "attribute" => {
            let obj = target.child_by_field_name("object");
            let attr = target.child_by_field_name("attribute");
            if let (Some(obj), Some(attr)) = (obj, attr) {
                if obj.kind() == "identifier" && node_text(obj, text) == receiver {
                    fields.push(node_text(attr, text).to_string());
                }
            }
        }
        "pattern_list" | "tuple_pattern" => {
            let mut cursor = target.walk();
            for t in target.named_children(&mut cursor) {
                push_receiver_attr(t, text, receiver, fields);
            }
        }
        _ => {}
    }
}

fn import_info(stmt: Node, text: &str) -> ImportInfo {
    let mut info = ImportInfo {
        module: String::new(),
        names: Vec::new(),
        is_relative: false,
        bound_names: Vec::new(),
    };
    if stmt.kind() == "import_statement" {
        let mut cursor = stmt.walk();
        for child in stmt.named_children(&mut cursor) {
            match child.kind() {
                "dotted_name" => {
                    let path = node_text(child, text).to_string();
                    let root = path.split('.').next().unwrap_or("").to_string();
                    if info.module.is_empty() {
                        info.module = path.clone();
                    }
                    info.names.push(path);
                    info.bound_names.push(root);
                }
                "aliased_import" => {
                    let path = child
                        .child_by_field_name("name")
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default();
                    let alias = child
                        .child_by_field_name("alias")
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default();
                    if info.module.is_empty() {
                        info.module = path.clone();
                    }
                    info.names.push(path);
                    info.bound_names.push(alias);
                }
                _ => {}
            }
        }
    } else {
        // import_from_statement
        if let Some(module) = stmt.child_by_field_name("module_name") {
            info.is_relative = module.kind() == "relative_import";
            info.module = node_text(module, text)
                .trim_start_matches('.')
                .to_string();
        }
        let mut cursor = stmt.walk();
        for child in stmt.named_children(&mut cursor) {
            // skip the module itself
            if Some(child) == stmt.child_by_field_name("module_name") {
                continue;
            }
            match child.kind() {
                "dotted_name" => {
                    let name = node_text(child, text).to_string();
                    info.bound_names.push(name.clone());
                    info.names.push(name);
                }
                "aliased_import" => {
                    let name = child
                        .child_by_field_name("name")
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default();
                    let alias = child
                        .child_by_field_name("alias")
                        .map(|n| node_text(n, text).to_string())
                        .unwrap_or_default();
                    info.names.push(name);
                    info.bound_names.push(alias);
                }
                "wildcard_import" => {
                    info.names.push("*".to_string());
                }
                _ => {}
            }
        }
    }
    info
}

fn call_site(call: Node, text: &str) -> CallSite {
    let callee_path = call
        .child_by_field_name("function")
        .and_then(|f| dotted_path(f, text));
    let mut positional_args = 0;
    let mut keyword_names = Vec::new();
    let mut has_splat = false;
    if let Some(args) = call.child_by_field_name("arguments") {
        let mut cursor = args.walk();
        for arg in args.named_children(&mut cursor) {
            match arg.kind() {
                "keyword_argument" => {
                    if let Some(name) = arg.child_by_field_name("name") {
                        keyword_names.push(node_text(name, text).to_string());
                    }
                }
                "list_splat" | "dictionary_splat" => has_splat = true,
                "comment" => {}
                _ => positional_args += 1,
            }
        }
    }
    CallSite {
        callee_path,
        positional_args,
        keyword_names,
        has_splat,
        in_loop: inside_loop(call),
        line: call.start_position().row + 1,
    }
}

/// Flatten an identifier / attribute chain into a dotted path.
pub(crate) fn dotted_path(node: Node, text: &str) -> Option<String> {
    match node.kind() {
        "identifier" => Some(node_text(node, text).to_string()),
        "attribute" => {
            let obj = dotted_path(node.child_by_field_name("object")?, text)?;
            let attr = node.child_by_field_name("attribute")?;
            Some(format!("{obj}.{}", node_text(attr, text)))
        }
        _ => None,
    }
}

fn inside_loop(node: Node) -> bool {
    let mut current = node.parent();
    while let Some(n) = current {
        match n.kind() {
            "for_statement" | "while_statement" => return true,
            "function_definition" | "class_definition" | "module" => return false,
            _ => current = n.parent(),
        }
    }
    false
}
