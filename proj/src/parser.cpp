#include "mlq/parser.hpp"

#include <charconv>
#include <initializer_list>

#include "mlq/lexer.hpp"

namespace mlq {

namespace {

struct SyntaxAbort {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

  Model parse_model() {
    Model model;
    if (at_end()) {
      report_end("a model requires at least one thing");
      return model;
    }
    bool seenConfig = false;
    while (!at_end() && diags_.size() < kMaxSyntaxDiagnostics) {
      try {
        if (peek().is_keyword("thing") && !seenConfig) {
          model.things.push_back(parse_thing());
        } else if (peek().is_keyword("configuration") && !model.things.empty()) {
          seenConfig = true;
          model.configurations.push_back(parse_configuration());
        } else if (model.things.empty()) {
          fail({"'thing'"});
        } else if (seenConfig) {
          fail({"'configuration'", "end of input"});
        } else {
          fail({"'thing'", "'configuration'", "end of input"});
        }
      } catch (const SyntaxAbort&) {
        synchronize();
      }
    }
    if (model.things.empty() && diags_.empty()) report_end("a model requires at least one thing");
    return model;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek() const { return toks_[pos_]; }
  bool at_end() const { return peek().kind == TokenKind::End; }
  SourceLoc loc() const { return {peek().line, peek().col}; }

  Token take() {
    Token t = toks_[pos_];
    if (!at_end()) ++pos_;
    return t;
  }

  bool check_keyword(std::string_view kw) const { return peek().is_keyword(kw); }
  bool check_punct(std::string_view p) const { return peek().is(TokenKind::Punctuation, p); }
  bool check_op(std::string_view p) const { return peek().is(TokenKind::Operator, p); }

  bool accept_keyword(std::string_view kw) {
    if (!check_keyword(kw)) return false;
    take();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!check_punct(p)) return false;
    take();
    return true;
  }

  Token expect_keyword(std::string_view kw) {
    if (!check_keyword(kw)) fail({"'" + std::string(kw) + "'"});
    return take();
  }
  Token expect_punct(std::string_view p) {
    if (!check_punct(p)) fail({"'" + std::string(p) + "'"});
    return take();
  }
  Token expect_op(std::string_view p) {
    if (!check_op(p)) fail({"'" + std::string(p) + "'"});
    return take();
  }
  NameRef expect_ident() {
    if (peek().kind != TokenKind::Identifier) fail({"identifier"});
    const Token t = take();
    return {{t.line, t.col}, t.lexeme};
  }
  std::string expect_string() {
    if (peek().kind != TokenKind::StringLiteral) fail({"string literal"});
    return unescape_string(take().lexeme);
  }
  Int expect_int() {
    if (peek().kind != TokenKind::IntLiteral) fail({"integer literal"});
    const Token t = take();
    Int v = 0;
    std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
    return v;
  }

  // -- diagnostics ----------------------------------------------------------

  void report_end(const std::string& what) {
    // Points at the last real token so the position stays inside the source.
    int line = 1;
    int col = 1;
    if (toks_.size() > 1) {
      line = toks_[toks_.size() - 2].line;
      col = toks_[toks_.size() - 2].col;
    }
    diags_.push_back({Severity::Error, "SYN002", "premature end of input: " + what, line, col});
  }

  [[noreturn]] void fail(std::initializer_list<std::string> expected) {
    std::string exp;
    std::size_t i = 0;
    for (const auto& e : expected) {
      if (i > 0) exp += (i + 1 == expected.size()) ? " or " : ", ";
      exp += e;
      ++i;
    }
    if (at_end()) {
      report_end("expected " + exp);
    } else {
      const auto& t = peek();
      diags_.push_back({Severity::Error, "SYN001",
                        "unexpected " + std::string(to_string(t.kind)) + " '" + t.lexeme + "'; expected " + exp,
                        t.line, t.col});
    }
    throw SyntaxAbort{};
  }

  void synchronize() {
    take();
    while (!at_end() && !check_keyword("thing") && !check_keyword("configuration")) take();
  }

  // -- declarations ---------------------------------------------------------

  DType parse_dtype() {
    static constexpr std::pair<std::string_view, DType> kTypes[] = {
        {"Int", DType::Int}, {"Real", DType::Real}, {"Bool", DType::Bool}, {"String", DType::String}};
    for (const auto& [kw, t] : kTypes) {
      if (accept_keyword(kw)) return t;
    }
    fail({"'Int'", "'Real'", "'Bool'", "'String'"});
  }

  ThingDef parse_thing() {
    expect_keyword("thing");
    ThingDef thing;
    const auto name = expect_ident();
    thing.loc = name.loc;
    thing.name = name.name;
    expect_punct("{");
    while (!check_keyword("statechart")) {
      if (check_keyword("property")) {
        thing.properties.push_back(parse_property());
      } else if (check_keyword("message")) {
        thing.messages.push_back(parse_message());
      } else if (check_keyword("provided") || check_keyword("required")) {
        thing.ports.push_back(parse_port());
      } else if (check_keyword("data_analytics")) {
        thing.analytics.push_back(parse_analytics());
      } else {
        fail({"'property'", "'message'", "'provided'", "'required'", "'data_analytics'", "'statechart'"});
      }
    }
    thing.statechart = parse_statechart();
    expect_punct("}");
    return thing;
  }

  PropertyDef parse_property() {
    expect_keyword("property");
    PropertyDef p;
    const auto name = expect_ident();
    p.loc = name.loc;
    p.name = name.name;
    expect_punct(":");
    p.dtype = parse_dtype();
    if (check_op("=")) {
      take();
      p.initialLoc = loc();
      p.initial = parse_literal();
    }
    return p;
  }

  // Literal with an optional leading minus for numbers.
  Value parse_literal() {
    bool negative = false;
    if (check_op("-")) {
      take();
      negative = true;
      if (peek().kind != TokenKind::IntLiteral && peek().kind != TokenKind::RealLiteral) {
        fail({"integer literal", "real literal"});
      }
    }
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntLiteral: {
        const Int v = expect_int();
        return box_int(negative ? wrap_neg(v) : v);
      }
      case TokenKind::RealLiteral: {
        const Token r = take();
        double v = 0;
        std::from_chars(r.lexeme.data(), r.lexeme.data() + r.lexeme.size(), v);
        return box_real(negative ? -v : v);
      }
      case TokenKind::StringLiteral: return box_str(unescape_string(take().lexeme));
      case TokenKind::BoolLiteral: return box_bool(take().lexeme == "true");
      default: fail({"literal"});
    }
  }

  MessageDef parse_message() {
    expect_keyword("message");
    MessageDef m;
    const auto name = expect_ident();
    m.loc = name.loc;
    m.name = name.name;
    expect_punct("(");
    if (!check_punct(")")) {
      do {
        ParamDef p;
        const auto pn = expect_ident();
        p.loc = pn.loc;
        p.name = pn.name;
        expect_punct(":");
        p.dtype = parse_dtype();
        m.params.push_back(p);
      } while (accept_punct(","));
    }
    expect_punct(")");
    return m;
  }

  std::vector<NameRef> parse_id_list() {
    std::vector<NameRef> ids;
    ids.push_back(expect_ident());
    while (accept_punct(",")) ids.push_back(expect_ident());
    return ids;
  }

  PortDef parse_port() {
    PortDef port;
    port.kind = check_keyword("provided") ? PortKind::Provided : PortKind::Required;
    take();
    expect_keyword("port");
    const auto name = expect_ident();
    port.loc = name.loc;
    port.name = name.name;
    expect_punct("{");
    if (accept_keyword("receives")) port.receives = parse_id_list();
    if (accept_keyword("sends")) port.sends = parse_id_list();
    if (!check_punct("}")) {
      if (port.receives.empty() && port.sends.empty()) fail({"'receives'", "'sends'", "'}'"});
      if (port.sends.empty()) fail({"'sends'", "'}'"});
    }
    expect_punct("}");
    return port;
  }

  DataAnalyticsDef parse_analytics() {
    expect_keyword("data_analytics");
    DataAnalyticsDef da;
    const auto name = expect_ident();
    da.loc = name.loc;
    da.name = name.name;
    expect_punct("{");
    expect_keyword("dataset");
    da.datasetPath = expect_string();
    expect_keyword("features");
    da.features = parse_id_list();
    expect_keyword("label");
    da.label = expect_ident();
    expect_keyword("model");
    da.algorithm.loc = loc();
    if (accept_keyword("linear_regression")) {
      da.algorithm.kind = AlgorithmSpec::Kind::LinearRegression;
    } else if (accept_keyword("knn")) {
      da.algorithm.kind = AlgorithmSpec::Kind::Knn;
      expect_punct("(");
      da.algorithm.loc = loc();
      da.algorithm.k = expect_int();
      expect_punct(")");
    } else {
      fail({"'linear_regression'", "'knn'"});
    }
    expect_keyword("save_to");
    da.modelPath = expect_string();
    expect_punct("}");
    return da;
  }

  // -- configuration --------------------------------------------------------

  ConfigurationDef parse_configuration() {
    expect_keyword("configuration");
    ConfigurationDef cfg;
    const auto name = expect_ident();
    cfg.loc = name.loc;
    cfg.name = name.name;
    expect_punct("{");
    do {
      expect_keyword("instance");
      InstanceDef inst;
      const auto in = expect_ident();
      inst.loc = in.loc;
      inst.name = in.name;
      expect_punct(":");
      inst.thing = expect_ident();
      cfg.instances.push_back(std::move(inst));
    } while (check_keyword("instance"));
    while (check_keyword("connector")) {
      ConnectorDef k;
      k.loc = loc();
      take();
      k.a = parse_endpoint();
      expect_punct("<->");
      k.b = parse_endpoint();
      cfg.connectors.push_back(std::move(k));
    }
    if (!check_punct("}")) fail({"'connector'", "'}'"});
    take();
    return cfg;
  }

  PortEndpoint parse_endpoint() {
    PortEndpoint e;
    e.instance = expect_ident();
    expect_punct(".");
    e.port = expect_ident();
    return e;
  }

  // -- statechart -----------------------------------------------------------

  StatechartDef parse_statechart() {
    StatechartDef sc;
    sc.loc = loc();
    expect_keyword("statechart");
    expect_keyword("init");
    sc.initialState = expect_ident();
    expect_punct("{");
    do {
      sc.states.push_back(parse_state());
    } while (check_keyword("state"));
    expect_punct("}");
    return sc;
  }

  StateDef parse_state() {
    expect_keyword("state");
    StateDef st;
    const auto name = expect_ident();
    st.loc = name.loc;
    st.name = name.name;
    expect_punct("{");
    bool entrySeen = false;
    bool exitSeen = false;
    while (check_keyword("on")) {
      take();
      if (!entrySeen && !exitSeen && accept_keyword("entry")) {
        entrySeen = true;
        st.entryActions = parse_action_block();
      } else if (!exitSeen && accept_keyword("exit")) {
        exitSeen = true;
        st.exitActions = parse_action_block();
      } else if (!entrySeen && !exitSeen) {
        fail({"'entry'", "'exit'"});
      } else {
        fail({"'exit'"});
      }
    }
    while (check_keyword("transition")) st.transitions.push_back(parse_transition());
    if (!check_punct("}")) {
      if (!exitSeen) fail({"'on'", "'transition'", "'}'"});
      fail({"'transition'", "'}'"});
    }
    take();
    return st;
  }

  TransitionDef parse_transition() {
    TransitionDef tr;
    tr.loc = loc();
    expect_keyword("transition");
    expect_punct("->");
    tr.target = expect_ident();
    expect_keyword("event");
    tr.trigger.loc = loc();
    if (accept_keyword("after")) {
      tr.trigger.kind = Trigger::Kind::After;
      expect_punct("(");
      tr.trigger.ticks = expect_int();
      expect_punct(")");
    } else if (peek().kind == TokenKind::Identifier) {
      tr.trigger.kind = Trigger::Kind::Message;
      tr.trigger.port = expect_ident();
      expect_punct("?");
      tr.trigger.message = expect_ident();
    } else {
      fail({"identifier", "'after'"});
    }
    if (accept_keyword("guard")) tr.guard = parse_expr();
    if (accept_keyword("action")) tr.actions = parse_action_block();
    return tr;
  }

  std::vector<Action> parse_action_block() {
    expect_punct("{");
    std::vector<Action> actions;
    while (!check_punct("}")) actions.push_back(parse_action());
    take();
    return actions;
  }

  bool at_action_start() const {
    if (peek().kind == TokenKind::Identifier) return true;
    for (auto kw : {"print", "var", "if", "da_train", "da_predict", "da_save", "da_observe"}) {
      if (check_keyword(kw)) return true;
    }
    return false;
  }

  [[noreturn]] void fail_action(bool allowEnd, bool allowElse) {
    if (allowElse) {
      fail({"identifier", "'print'", "'var'", "'if'", "'da_train'", "'da_predict'", "'da_save'", "'da_observe'",
            "'else'", "'end'"});
    }
    if (allowEnd) {
      fail({"identifier", "'print'", "'var'", "'if'", "'da_train'", "'da_predict'", "'da_save'", "'da_observe'",
            "'end'"});
    }
    fail({"identifier", "'print'", "'var'", "'if'", "'da_train'", "'da_predict'", "'da_save'", "'da_observe'",
          "'}'"});
  }

  Action parse_action() {
    Action a;
    a.loc = loc();
    if (peek().kind == TokenKind::Identifier) {
      a.target = expect_ident();
      if (check_op("=")) {
        take();
        a.kind = Action::Kind::Assign;
        a.value = parse_expr();
      } else if (accept_punct("!")) {
        a.kind = Action::Kind::Send;
        a.message = expect_ident();
        expect_punct("(");
        if (!check_punct(")")) a.args = parse_expr_list();
        expect_punct(")");
      } else {
        fail({"'='", "'!'"});
      }
      return a;
    }
    if (accept_keyword("print")) {
      a.kind = Action::Kind::Print;
      a.value = parse_expr();
    } else if (accept_keyword("var")) {
      a.kind = Action::Kind::VarDecl;
      a.target = expect_ident();
      expect_punct(":");
      a.dtype = parse_dtype();
      expect_op("=");
      a.value = parse_expr();
    } else if (accept_keyword("if")) {
      a.kind = Action::Kind::If;
      a.value = parse_expr();
      expect_keyword("then");
      while (!check_keyword("else") && !check_keyword("end")) {
        if (!at_action_start()) fail_action(true, true);
        a.thenActions.push_back(parse_action());
      }
      if (accept_keyword("else")) {
        while (!check_keyword("end")) {
          if (!at_action_start()) fail_action(true, false);
          a.elseActions.push_back(parse_action());
        }
      }
      expect_keyword("end");
    } else if (accept_keyword("da_train")) {
      a.kind = Action::Kind::DaTrain;
      a.target = expect_ident();
    } else if (accept_keyword("da_save")) {
      a.kind = Action::Kind::DaSave;
      a.target = expect_ident();
    } else if (accept_keyword("da_predict")) {
      a.kind = Action::Kind::DaPredict;
      a.target = expect_ident();
      expect_punct("->");
      a.message = expect_ident();
      expect_punct("(");
      if (!check_punct(")")) a.args = parse_expr_list();
      expect_punct(")");
    } else if (accept_keyword("da_observe")) {
      a.kind = Action::Kind::DaObserve;
      a.target = expect_ident();
      expect_punct("(");
      if (!check_punct(";")) a.args = parse_expr_list();
      expect_punct(";");
      a.value = parse_expr();
      expect_punct(")");
    } else {
      fail_action(false, false);
    }
    return a;
  }

  std::vector<Expr> parse_expr_list() {
    std::vector<Expr> xs;
    xs.push_back(parse_expr());
    while (accept_punct(",")) xs.push_back(parse_expr());
    return xs;
  }

  // -- expressions ----------------------------------------------------------

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (check_keyword("or")) {
      const auto at = loc();
      take();
      lhs = Expr::binary_of(BinaryOp::Or, std::move(lhs), parse_and(), at);
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_not();
    while (check_keyword("and")) {
      const auto at = loc();
      take();
      lhs = Expr::binary_of(BinaryOp::And, std::move(lhs), parse_not(), at);
    }
    return lhs;
  }

  Expr parse_not() {
    if (check_keyword("not")) {
      const auto at = loc();
      take();
      return Expr::unary_of(UnaryOp::Not, parse_not(), at);
    }
    return parse_comparison();
  }

  Expr parse_comparison() {
    Expr lhs = parse_additive();
    static constexpr std::pair<std::string_view, BinaryOp> kOps[] = {
        {"<", BinaryOp::Lt},  {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},
        {">=", BinaryOp::Ge}, {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}};
    for (const auto& [text, op] : kOps) {
      if (check_op(text)) {
        const auto at = loc();
        take();
        return Expr::binary_of(op, std::move(lhs), parse_additive(), at);
      }
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (check_op("+") || check_op("-")) {
      const auto at = loc();
      const auto op = take().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = Expr::binary_of(op, std::move(lhs), parse_multiplicative(), at);
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (check_op("*") || check_op("/")) {
      const auto at = loc();
      const auto op = take().lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = Expr::binary_of(op, std::move(lhs), parse_unary(), at);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (check_op("-")) {
      const auto at = loc();
      take();
      return Expr::unary_of(UnaryOp::Neg, parse_unary(), at);
    }
    return parse_primary();
  }

  Expr parse_primary() {
    const auto at = loc();
    switch (peek().kind) {
      case TokenKind::IntLiteral:
      case TokenKind::RealLiteral:
      case TokenKind::StringLiteral:
      case TokenKind::BoolLiteral: return Expr::lit(parse_literal(), at);
      case TokenKind::Identifier: {
        auto name = expect_ident();
        return Expr::ref_to(std::move(name.name), at);
      }
      default: break;
    }
    if (accept_punct("(")) {
      Expr inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

ParseResult parse(std::string_view source, std::string sourceName) {
  ParseResult result;
  auto lexed = tokenize(source);
  if (!lexed.ok()) {
    result.diagnostics = std::move(lexed.diagnostics);
    if (result.diagnostics.size() > kMaxSyntaxDiagnostics) result.diagnostics.resize(kMaxSyntaxDiagnostics);
    return result;
  }
  Parser parser(std::move(lexed.tokens), result.diagnostics);
  Model model = parser.parse_model();
  if (result.diagnostics.size() > kMaxSyntaxDiagnostics) result.diagnostics.resize(kMaxSyntaxDiagnostics);
  if (result.diagnostics.empty()) {
    model.sourceName = std::move(sourceName);
    result.model = std::move(model);
  }
  return result;
}

}  // namespace mlq
