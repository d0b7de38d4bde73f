#include "conceptual/parser.hpp"

#include <deque>

namespace conceptual::parser {

using lex::Token;
using lex::TokenKind;
using namespace ast;

namespace {

class Parser {
 public:
  explicit Parser(lex::Lexer& lexer) : lexer_(lexer) {}

  Model parse_model() {
    Model m;
    while (peek().kind == TokenKind::Concept) m.concepts.push_back(parse_concept());
    while (peek().kind == TokenKind::App) m.apps.push_back(parse_app());
    expect(TokenKind::Eof, "end of input");
    return m;
  }

  ExprPtr parse_expr_entry() {
    ExprPtr e = parse_expr();
    expect(TokenKind::Eof, "end of input");
    return e;
  }

  Type parse_type_entry() {
    Type t = parse_type();
    expect(TokenKind::Eof, "end of input");
    return t;
  }

 private:
  // --- token plumbing -------------------------------------------------------

  const Token& peek(size_t n = 0) {
    while (buffer_.size() <= n) buffer_.push_back(lexer_.next());
    return buffer_[n];
  }

  Token advance() {
    peek();
    Token t = std::move(buffer_.front());
    buffer_.pop_front();
    last_ = t;
    return t;
  }

  bool check(TokenKind k) { return peek().kind == k; }

  bool accept(TokenKind k) {
    if (!check(k)) return false;
    advance();
    return true;
  }

  Token expect(TokenKind k, const char* what) {
    if (!check(k))
      fail(std::string("expected ") + what + ", found " + peek().describe());
    return advance();
  }

  [[noreturn]] void fail(std::string message) {
    // Approximate location: the end of the most recently consumed token. The
    // true error is at or after this position, never before it.
    throw SyntaxError(std::move(message), approx_loc());
  }

  SourceLocation approx_loc() const {
    return last_.lexeme.empty() && last_.kind == TokenKind::Eof
               ? SourceLocation::point(lexer_.file(), 1, 1)
               : SourceLocation::point(lexer_.file(), last_.loc.end_line, last_.loc.end_col);
  }

  SourceLocation span_from(const SourceLocation& start) const {
    return SourceLocation::merge(start, last_.loc);
  }

  // --- types ----------------------------------------------------------------

  PrimType parse_prim() {
    if (accept(TokenKind::Str)) return PrimType::str();
    if (accept(TokenKind::Int)) return PrimType::integer();
    if (check(TokenKind::Ident)) return PrimType::named(advance().text);
    fail("expected a primitive type, found " + peek().describe());
  }

  std::optional<Mult> parse_opt_mult() {
    if (accept(TokenKind::Set)) return Mult::Set;
    if (accept(TokenKind::One)) return Mult::One;
    if (accept(TokenKind::Lone)) return Mult::Lone;
    if (check(TokenKind::Some))
      fail("'some' is not a valid multiplicity in a declaration");
    return std::nullopt;
  }

  Type parse_type() {
    std::optional<Mult> mult = parse_opt_mult();
    PrimType first = parse_prim();
    if (!check(TokenKind::Arrow)) return ScalarType{mult, std::move(first)};
    if (mult)
      fail("a multiplicity may only prefix the final column of a relation type");

    RelationType rel;
    rel.columns.push_back(std::move(first));
    while (accept(TokenKind::Arrow)) {
      std::optional<Mult> m = parse_opt_mult();
      rel.columns.push_back(parse_prim());
      if (m) {
        if (check(TokenKind::Arrow))
          fail("a multiplicity may only prefix the final column of a relation type");
        rel.target_mult = m;
      }
    }
    return rel;
  }

  Decl parse_decl() {
    SourceLocation start = peek().loc;
    Decl d;
    d.names.push_back(expect(TokenKind::Ident, "an identifier").text);
    while (accept(TokenKind::Comma))
      d.names.push_back(expect(TokenKind::Ident, "an identifier").text);
    expect(TokenKind::Colon, "':'");
    d.type = parse_type();
    d.loc = span_from(start);
    return d;
  }

  // --- expressions ----------------------------------------------------------
  //
  // Precedence, tightest first:
  //   ~ ^ *^  |  .  |  [..]  |  ->  |  & * / %  |  #  |  + -
  //   |  [not] cmp  |  not  |  &&  |  ||  |  no  |  until  |  then
  // All binary operators are left-associative except `then` (right);
  // comparisons are non-associative.

  ExprPtr parse_expr() { return parse_then(); }

  ExprPtr parse_then() {
    ExprPtr lhs = parse_until();
    if (check(TokenKind::Then)) {
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_then();  // right-associative
      return make_expr(span_from(start),
                       BinopExpr{BinOp::Then, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_until() {
    ExprPtr lhs = parse_no();
    while (check(TokenKind::Until)) {
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_no();
      lhs = make_expr(span_from(start),
                      BinopExpr{BinOp::Until, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_no() {
    if (check(TokenKind::No)) {
      SourceLocation start = peek().loc;
      advance();
      ExprPtr operand = parse_no();
      return make_expr(span_from(start), UnopExpr{UnOp::No, std::move(operand)});
    }
    return parse_lor();
  }

  ExprPtr parse_lor() {
    ExprPtr lhs = parse_land();
    while (check(TokenKind::Lor)) {
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_land();
      lhs = make_expr(span_from(start),
                      BinopExpr{BinOp::Lor, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_land() {
    ExprPtr lhs = parse_logical_not();
    while (check(TokenKind::Land)) {
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_logical_not();
      lhs = make_expr(span_from(start),
                      BinopExpr{BinOp::Land, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_logical_not() {
    if (check(TokenKind::Not)) {
      SourceLocation start = peek().loc;
      advance();
      ExprPtr operand = parse_logical_not();
      return make_expr(span_from(start), UnopExpr{UnOp::Not, std::move(operand)});
    }
    return parse_comparison();
  }

  static std::optional<CmpOp> as_cmpop(TokenKind k) {
    switch (k) {
      case TokenKind::Eq: return CmpOp::Eq;
      case TokenKind::In: return CmpOp::In;
      case TokenKind::Lt: return CmpOp::Lt;
      case TokenKind::Gt: return CmpOp::Gt;
      case TokenKind::Lte: return CmpOp::Lte;
      case TokenKind::Gte: return CmpOp::Gte;
      default: return std::nullopt;
    }
  }

  bool at_comparison() {
    if (as_cmpop(peek().kind)) return true;
    return check(TokenKind::Not) && as_cmpop(peek(1).kind).has_value();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    if (!at_comparison()) return lhs;
    SourceLocation start = lhs->loc;
    bool negated = accept(TokenKind::Not);
    CmpOp op = *as_cmpop(advance().kind);
    ExprPtr rhs = parse_additive();
    if (at_comparison())
      fail("comparison operators are non-associative; parenthesize the chain");
    return make_expr(span_from(start),
                     CompareExpr{op, negated, std::move(lhs), std::move(rhs)});
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_card();
    for (;;) {
      BinOp op;
      if (check(TokenKind::Plus)) op = BinOp::Plus;
      else if (check(TokenKind::Minus)) op = BinOp::Minus;
      else break;
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_card();
      lhs = make_expr(span_from(start), BinopExpr{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_card() {
    if (check(TokenKind::Card)) {
      SourceLocation start = peek().loc;
      advance();
      ExprPtr operand = parse_card();
      return make_expr(span_from(start), UnopExpr{UnOp::Card, std::move(operand)});
    }
    return parse_multiplicative();
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_arrow();
    for (;;) {
      BinOp op;
      if (check(TokenKind::Amp)) op = BinOp::Amp;
      else if (check(TokenKind::Star)) op = BinOp::Star;
      else if (check(TokenKind::Slash)) op = BinOp::Slash;
      else if (check(TokenKind::Percent)) op = BinOp::Percent;
      else break;
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_arrow();
      lhs = make_expr(span_from(start), BinopExpr{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_arrow() {
    ExprPtr lhs = parse_box();
    while (check(TokenKind::Arrow)) {
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_box();
      lhs = make_expr(span_from(start),
                      BinopExpr{BinOp::Arrow, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_box() {
    ExprPtr target = parse_dot();
    while (check(TokenKind::LBrack)) {
      SourceLocation start = target->loc;
      advance();
      BoxJoinExpr box{std::move(target), {}};
      box.args.push_back(parse_expr());
      while (accept(TokenKind::Comma)) box.args.push_back(parse_expr());
      expect(TokenKind::RBrack, "']'");
      target = make_expr(span_from(start), std::move(box));
    }
    return target;
  }

  ExprPtr parse_dot() {
    ExprPtr lhs = parse_unary();
    while (check(TokenKind::Dot)) {
      SourceLocation start = lhs->loc;
      advance();
      ExprPtr rhs = parse_unary();
      lhs = make_expr(span_from(start),
                      BinopExpr{BinOp::Dot, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    SourceLocation start = peek().loc;
    if (accept(TokenKind::Tilde)) {
      ExprPtr operand = parse_unary();
      return make_expr(span_from(start), UnopExpr{UnOp::Transpose, std::move(operand)});
    }
    if (accept(TokenKind::Caret)) {
      ExprPtr operand = parse_unary();
      return make_expr(span_from(start), UnopExpr{UnOp::Closure, std::move(operand)});
    }
    if (check(TokenKind::Star) && peek(1).kind == TokenKind::Caret) {
      advance();
      advance();
      ExprPtr operand = parse_unary();
      return make_expr(span_from(start), UnopExpr{UnOp::ReflClosure, std::move(operand)});
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    SourceLocation start = peek().loc;
    switch (peek().kind) {
      case TokenKind::Empty:
        advance();
        return make_expr(span_from(start), EmptySetExpr{});
      case TokenKind::IntLit: {
        Token t = advance();
        return make_expr(span_from(start), IntLitExpr{t.int_value});
      }
      case TokenKind::Minus: {
        if (peek(1).kind != TokenKind::IntLit)
          fail("expected an integer literal after '-'");
        advance();
        Token t = advance();
        return make_expr(span_from(start), IntLitExpr{-t.int_value});
      }
      case TokenKind::StrLit: {
        Token t = advance();
        return make_expr(span_from(start), StrLitExpr{std::move(t.text)});
      }
      case TokenKind::Ident: {
        Token t = advance();
        return make_expr(span_from(start), NameExpr{std::move(t.text)});
      }
      case TokenKind::LPar: {
        advance();
        ExprPtr inner = parse_expr();
        expect(TokenKind::RPar, "')'");
        return inner;
      }
      case TokenKind::LBrace: {
        advance();
        ComprehensionExpr comp;
        comp.decls.push_back(parse_decl());
        while (accept(TokenKind::Comma)) comp.decls.push_back(parse_decl());
        expect(TokenKind::Pipe, "'|'");
        comp.body = parse_expr();
        expect(TokenKind::RBrace, "'}'");
        return make_expr(span_from(start), std::move(comp));
      }
      case TokenKind::Can: {
        advance();
        CanMod can = accept(TokenKind::Not) ? CanMod::CanNot : CanMod::Can;
        return parse_call(can, start);
      }
      case TokenKind::Act:
        return parse_call(CanMod::None, start);
      default:
        fail("expected an expression, found " + peek().describe());
    }
  }

  ExprPtr parse_call(CanMod can, const SourceLocation& start) {
    Token head = expect(TokenKind::Act, "an action call");
    expect(TokenKind::LPar, "'('");
    CallExpr call{std::move(head.text), {}, can};
    if (!check(TokenKind::RPar)) {
      call.args.push_back(parse_expr());
      while (accept(TokenKind::Comma)) call.args.push_back(parse_expr());
    }
    expect(TokenKind::RPar, "')'");
    return make_expr(span_from(start), std::move(call));
  }

  // --- concepts ---------------------------------------------------------------

  Concept parse_concept() {
    SourceLocation start = peek().loc;
    expect(TokenKind::Concept, "'concept'");
    Concept c;
    c.name = expect(TokenKind::Ident, "a concept name").text;
    if (accept(TokenKind::LBrack)) {
      // Empty brackets are legal and carry no meaning.
      if (!check(TokenKind::RBrack)) {
        c.type_params.push_back(expect(TokenKind::Ident, "a type parameter").text);
        while (accept(TokenKind::Comma))
          c.type_params.push_back(expect(TokenKind::Ident, "a type parameter").text);
      }
      expect(TokenKind::RBrack, "']'");
    }

    expect(TokenKind::Purpose, "'purpose'");
    c.purpose = expect(TokenKind::StrLit, "the purpose string").text;

    expect(TokenKind::State, "'state'");
    while (!check(TokenKind::Actions)) c.states.push_back(parse_state_decl());

    expect(TokenKind::Actions, "'actions'");
    c.actions.push_back(parse_action());
    while (!check(TokenKind::Op)) c.actions.push_back(parse_action());

    expect(TokenKind::Op, "'principle'");
    if (!at_section_end()) {
      c.principles.push_back(parse_expr());
      while (accept(TokenKind::Comma)) c.principles.push_back(parse_expr());
    }
    c.loc = span_from(start);
    return c;
  }

  bool at_section_end() {
    switch (peek().kind) {
      case TokenKind::Concept:
      case TokenKind::App:
      case TokenKind::Eof:
        return true;
      default:
        return false;
    }
  }

  StateDecl parse_state_decl() {
    SourceLocation start = peek().loc;
    StateDecl s;
    s.is_const = accept(TokenKind::Const);
    s.decl = parse_decl();
    if (accept(TokenKind::Eq)) s.init = parse_expr();
    s.loc = span_from(start);
    return s;
  }

  Action parse_action() {
    SourceLocation start = peek().loc;
    Action a;
    a.name = expect(TokenKind::Act, "an action signature").text;
    expect(TokenKind::LPar, "'('");
    if (!check(TokenKind::RPar)) {
      a.params.push_back(parse_decl());
      while (accept(TokenKind::Comma)) a.params.push_back(parse_decl());
    }
    expect(TokenKind::RPar, "')'");

    if (accept(TokenKind::Colon)) {
      Query q;
      q.return_type = parse_type();
      q.body = parse_expr();
      a.kind = std::move(q);
    } else {
      Mutator m;
      if (accept(TokenKind::When)) m.firing_cond = parse_expr();
      while (check(TokenKind::Ident)) m.body.push_back(parse_stmt());
      a.kind = std::move(m);
    }
    a.loc = span_from(start);
    return a;
  }

  Lval parse_lval() {
    SourceLocation start = peek().loc;
    Lval lv;
    lv.path.push_back(expect(TokenKind::Ident, "an assignment target").text);
    while (accept(TokenKind::Dot))
      lv.path.push_back(expect(TokenKind::Ident, "an identifier after '.'").text);
    lv.loc = span_from(start);
    return lv;
  }

  static std::optional<BinOp> as_compoundable(TokenKind k) {
    switch (k) {
      case TokenKind::Plus: return BinOp::Plus;
      case TokenKind::Minus: return BinOp::Minus;
      case TokenKind::Amp: return BinOp::Amp;
      case TokenKind::Dot: return BinOp::Dot;
      case TokenKind::Arrow: return BinOp::Arrow;
      case TokenKind::Star: return BinOp::Star;
      case TokenKind::Slash: return BinOp::Slash;
      case TokenKind::Percent: return BinOp::Percent;
      case TokenKind::Land: return BinOp::Land;
      case TokenKind::Lor: return BinOp::Lor;
      case TokenKind::Then: return BinOp::Then;
      case TokenKind::Until: return BinOp::Until;
      default: return std::nullopt;
    }
  }

  Stmt parse_stmt() {
    SourceLocation start = peek().loc;
    Stmt s;
    s.lhs.push_back(parse_lval());
    while (accept(TokenKind::Comma)) s.lhs.push_back(parse_lval());

    if (accept(TokenKind::Colon)) {
      expect(TokenKind::Eq, "'=' after ':'");
      s.compound = std::nullopt;
    } else if (auto op = as_compoundable(peek().kind);
               op && peek(1).kind == TokenKind::Eq) {
      advance();
      advance();
      s.compound = op;
    } else {
      fail("expected ':=' or a compound assignment, found " + peek().describe());
    }
    s.rhs = parse_expr();
    s.loc = span_from(start);
    return s;
  }

  // --- apps ---------------------------------------------------------------------

  App parse_app() {
    SourceLocation start = peek().loc;
    expect(TokenKind::App, "'app'");
    App app;
    app.name = expect(TokenKind::Ident, "an app name").text;
    expect(TokenKind::Include, "'include'");
    app.deps.push_back(parse_dependency());
    while (check(TokenKind::Ident) || check(TokenKind::Dot))
      app.deps.push_back(parse_dependency());
    while (check(TokenKind::Sync)) app.syncs.push_back(parse_sync());
    app.loc = span_from(start);
    return app;
  }

  Dependency parse_dependency() {
    SourceLocation start = peek().loc;
    Dependency dep;
    dep.path = parse_filepath();
    if (accept(TokenKind::LBrack)) {
      dep.brackets_present = true;
      if (!check(TokenKind::RBrack)) {
        dep.type_args.push_back(parse_qual_prim());
        while (accept(TokenKind::Comma)) dep.type_args.push_back(parse_qual_prim());
      }
      expect(TokenKind::RBrack, "']'");
    }
    dep.loc = span_from(start);
    return dep;
  }

  std::string parse_filepath() {
    std::string path;
    for (;;) {
      if (check(TokenKind::Dot)) {
        // `../` segment: DOT DOT SLASH
        advance();
        expect(TokenKind::Dot, "'.' in '../'");
        expect(TokenKind::Slash, "'/' in '../'");
        path += "../";
        continue;
      }
      if (check(TokenKind::Ident) && peek(1).kind == TokenKind::Slash) {
        path += advance().text;
        advance();
        path += '/';
        continue;
      }
      break;
    }
    path += expect(TokenKind::Ident, "a file name").text;
    if (check(TokenKind::Dot) && peek(1).kind == TokenKind::Ident) {
      advance();
      path += '.';
      path += advance().text;
    }
    return path;
  }

  QualPrim parse_qual_prim() {
    SourceLocation start = peek().loc;
    QualPrim qp;
    if (check(TokenKind::Ident) && peek(1).kind == TokenKind::Dot) {
      qp.ns = advance().text;
      advance();
    }
    qp.prim = parse_prim();
    qp.loc = span_from(start);
    return qp;
  }

  Sync parse_sync() {
    SourceLocation start = peek().loc;
    expect(TokenKind::Sync, "'sync'");
    Sync sync;
    sync.trigger = parse_sync_call(/*allow_mult=*/true);
    sync.responses.push_back(parse_sync_call(/*allow_mult=*/false));
    while (check(TokenKind::Ident)) sync.responses.push_back(parse_sync_call(false));
    sync.loc = span_from(start);
    return sync;
  }

  SyncCall parse_sync_call(bool allow_mult) {
    SourceLocation start = peek().loc;
    SyncCall call;
    call.concept_name = expect(TokenKind::Ident, "a concept name").text;
    expect(TokenKind::Dot, "'.'");
    call.action = expect(TokenKind::Act, "an action call").text;
    expect(TokenKind::LPar, "'('");
    if (!check(TokenKind::RPar)) {
      call.args.push_back(parse_sync_arg(allow_mult));
      while (accept(TokenKind::Comma)) call.args.push_back(parse_sync_arg(allow_mult));
    }
    expect(TokenKind::RPar, "')'");
    call.loc = span_from(start);
    return call;
  }

  SyncArg parse_sync_arg(bool allow_mult) {
    SyncArg arg;
    if (allow_mult) arg.mult = parse_opt_mult();
    arg.expr = parse_expr();
    return arg;
  }

  lex::Lexer& lexer_;
  std::deque<Token> buffer_;
  Token last_;
};

}  // namespace

Model parse(lex::Lexer& lexer) { return Parser(lexer).parse_model(); }

Model parse_source(std::string_view source, const std::string& file_path) {
  lex::Lexer lexer(source, file_path);
  return parse(lexer);
}

ExprPtr parse_expr_source(std::string_view source, const std::string& file_path) {
  lex::Lexer lexer(source, file_path);
  return Parser(lexer).parse_expr_entry();
}

Type parse_type_source(std::string_view source, const std::string& file_path) {
  lex::Lexer lexer(source, file_path);
  return Parser(lexer).parse_type_entry();
}

}  // namespace conceptual::parser
