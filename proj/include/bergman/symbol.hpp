#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "bergman/core.hpp"
#include "bergman/expr.hpp"

namespace bergman {

/// An evaluable function on a domain. Parsed symbols keep their expression
/// tree so the exact (series, polynomial) routes can use it; plain callables
/// only support pointwise evaluation.
class Symbol {
 public:
  using Fn = std::function<cplx(std::span<const cplx>)>;

  Symbol() : Symbol(Expr(1.0)) {}
  Symbol(Expr e, std::string name = {});  // NOLINT: expressions are symbols
  Symbol(Fn fn, std::size_t dim, std::string name);

  static Symbol parse(std::string_view text);
  static Symbol constant(cplx c) { return Symbol(Expr(c)); }

  cplx operator()(std::span<const cplx> z) const { return fn_(z); }
  cplx operator()(cplx z) const { return fn_(std::span<const cplx>(&z, 1)); }
  cplx operator()(const DomainPoint& p) const { return fn_(p.span()); }

  const std::optional<Expr>& expr() const noexcept { return expr_; }
  const std::string& name() const noexcept { return name_; }
  /// Smallest dimension the symbol can be evaluated in.
  std::size_t min_dim() const noexcept { return dim_; }

  /// 1/f, kept symbolic when possible.
  Symbol reciprocal() const;
  /// Pointwise product, kept symbolic when both sides are.
  friend Symbol operator*(const Symbol& a, const Symbol& b);

 private:
  Fn fn_;
  std::optional<Expr> expr_;
  std::string name_;
  std::size_t dim_ = 0;
};

}  // namespace bergman
