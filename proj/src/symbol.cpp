#include "bergman/symbol.hpp"

namespace bergman {

Symbol::Symbol(Expr e, std::string name)
    : expr_(e), name_(name.empty() ? e.to_string() : std::move(name)), dim_(e.min_dim()) {
  fn_ = [e](std::span<const cplx> z) { return e(z); };
}

Symbol::Symbol(Fn fn, std::size_t dim, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)), dim_(dim) {
  require(static_cast<bool>(fn_), "symbol needs a callable");
}

Symbol Symbol::parse(std::string_view text) { return Symbol(parse_expr(text), std::string(text)); }

Symbol Symbol::reciprocal() const {
  if (expr_) return Symbol(Expr(1.0) / *expr_, "1/(" + name_ + ")");
  Fn f = fn_;
  return Symbol([f](std::span<const cplx> z) { return cplx{1.0} / f(z); }, dim_,
                "1/(" + name_ + ")");
}

Symbol operator*(const Symbol& a, const Symbol& b) {
  if (a.expr_ && b.expr_) {
    return Symbol(*a.expr_ * *b.expr_, "(" + a.name_ + ")*(" + b.name_ + ")");
  }
  Symbol::Fn fa = a.fn_, fb = b.fn_;
  return Symbol([fa, fb](std::span<const cplx> z) { return fa(z) * fb(z); },
                std::max(a.dim_, b.dim_), "(" + a.name_ + ")*(" + b.name_ + ")");
}

}  // namespace bergman
