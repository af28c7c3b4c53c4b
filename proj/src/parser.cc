#include "gatsort/parser.h"

#include <cctype>
#include <set>

#include "gatsort/error.h"

namespace gatsort {

namespace {

enum class Tok { Name, LParen, RParen, Colon, Semi, Equals, Backslash, Dot, Assign, End };

struct Token {
	Tok kind;
	std::string text;
	std::size_t line;
	std::size_t column;
};

const char* describe(Tok kind) {
	switch (kind) {
	case Tok::Name:
		return "identifier";
	case Tok::LParen:
		return "'('";
	case Tok::RParen:
		return "')'";
	case Tok::Colon:
		return "':'";
	case Tok::Semi:
		return "';'";
	case Tok::Equals:
		return "'='";
	case Tok::Backslash:
		return "'\\'";
	case Tok::Dot:
		return "'.'";
	case Tok::Assign:
		return "':='";
	case Tok::End:
		return "end of input";
	}
	return "?";
}

std::vector<Token> lex(std::string_view text, std::size_t line = 1, std::size_t column = 1) {
	std::vector<Token> tokens;
	std::size_t i = 0;
	auto advance = [&](std::size_t n) {
		for (std::size_t k = 0; k < n; ++k) {
			if (text[i] == '\n') {
				++line;
				column = 1;
			} else {
				++column;
			}
			++i;
		}
	};
	while (i < text.size()) {
		char c = text[i];
		if (std::isspace(static_cast<unsigned char>(c))) {
			advance(1);
			continue;
		}
		if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
			while (i < text.size() && text[i] != '\n') {
				advance(1);
			}
			continue;
		}
		std::size_t l = line;
		std::size_t col = column;
		if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t j = i;
			while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
				++j;
			}
			std::string word(text.substr(i, j - i));
			if (std::isdigit(static_cast<unsigned char>(word.front()))) {
				throw ParseError(l, col, "identifier may not start with a digit: " + word);
			}
			tokens.push_back({Tok::Name, word, l, col});
			advance(j - i);
			continue;
		}
		Tok kind;
		std::size_t width = 1;
		switch (c) {
		case '(':
			kind = Tok::LParen;
			break;
		case ')':
			kind = Tok::RParen;
			break;
		case ':':
			if (i + 1 < text.size() && text[i + 1] == '=') {
				kind = Tok::Assign;
				width = 2;
			} else {
				kind = Tok::Colon;
			}
			break;
		case ';':
			kind = Tok::Semi;
			break;
		case '=':
			kind = Tok::Equals;
			break;
		case '\\':
			kind = Tok::Backslash;
			break;
		case '.':
			kind = Tok::Dot;
			break;
		default:
			throw ParseError(l, col, std::string("unexpected character '") + c + "'");
		}
		tokens.push_back({kind, std::string(text.substr(i, width)), l, col});
		advance(width);
	}
	tokens.push_back({Tok::End, "", line, column});
	return tokens;
}

class Parser {
public:
	explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

	bool at_end() const { return peek().kind == Tok::End; }
	const Token& peek(std::size_t ahead = 0) const {
		std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
		return tokens_[i];
	}

	const Token& expect(Tok kind) {
		const Token& tok = peek();
		if (tok.kind != kind) {
			fail(tok, std::string("expected ") + describe(kind) + ", found " + found(tok));
		}
		++pos_;
		return tok;
	}

	std::string name() {
		const Token& tok = expect(Tok::Name);
		if (is_keyword(tok.text)) {
			fail(tok, "keyword '" + tok.text + "' cannot be used as a name");
		}
		return tok.text;
	}

	Expr type() {
		const Token& tok = peek();
		if (tok.kind == Tok::Name && tok.text == "Set") {
			++pos_;
			return set_universe();
		}
		if (tok.kind == Tok::LParen && peek(1).kind == Tok::Name && !is_keyword(peek(1).text) &&
		    peek(2).kind == Tok::Colon) {
			++pos_;
			std::string binder = name();
			expect(Tok::Colon);
			Expr domain = term();
			expect(Tok::RParen);
			return pi(std::move(binder), std::move(domain), type());
		}
		Expr lhs = term();
		if (peek().kind == Tok::Equals) {
			++pos_;
			Expr rhs = term();
			expect(Tok::Colon);
			return eq(std::move(lhs), std::move(rhs), type());
		}
		return small(std::move(lhs));
	}

	Expr term() {
		Expr result = atom();
		while (starts_atom(peek())) {
			result = app(std::move(result), atom());
		}
		return result;
	}

	[[noreturn]] void fail(const Token& tok, const std::string& message) const {
		throw ParseError(tok.line, tok.column, message);
	}

private:
	static bool starts_atom(const Token& tok) {
		if (tok.kind == Tok::Name) {
			return tok.text != "Set";
		}
		return tok.kind == Tok::LParen || tok.kind == Tok::Backslash;
	}

	static std::string found(const Token& tok) {
		return tok.kind == Tok::End ? "end of input" : "'" + tok.text + "'";
	}

	Expr atom() {
		const Token& tok = peek();
		switch (tok.kind) {
		case Tok::Name:
			if (tok.text == "refl") {
				++pos_;
				if (!starts_atom(peek())) {
					fail(peek(), "expected an argument to refl, found " + found(peek()));
				}
				return refl(atom());
			}
			if (tok.text == "Set") {
				fail(tok, "Set is a type, not a term");
			}
			++pos_;
			return var(tok.text);
		case Tok::LParen: {
			++pos_;
			Expr inner = term();
			expect(Tok::RParen);
			return inner;
		}
		case Tok::Backslash: {
			++pos_;
			std::string binder = name();
			expect(Tok::Colon);
			Expr domain = term();
			expect(Tok::Dot);
			return lam(std::move(binder), std::move(domain), term());
		}
		default:
			fail(tok, "expected a term, found " + found(tok));
		}
	}

	std::vector<Token> tokens_;
	std::size_t pos_ = 0;
};

} // namespace

Theory parse_theory(std::string_view text) {
	Parser parser(lex(text));
	Theory theory;
	std::set<std::string> seen;
	while (!parser.at_end()) {
		const Token head = parser.peek();
		std::string name = parser.name();
		if (!seen.insert(name).second) {
			parser.fail(head, "duplicate declaration '" + name + "'");
		}
		parser.expect(Tok::Colon);
		Expr type = parser.type();
		parser.expect(Tok::Semi);
		theory.decls.push_back({std::move(name), std::move(type)});
	}
	return theory;
}

Expr parse_type(std::string_view text) {
	Parser parser(lex(text));
	Expr result = parser.type();
	parser.expect(Tok::End);
	return result;
}

Expr parse_term(std::string_view text) {
	Parser parser(lex(text));
	Expr result = parser.term();
	parser.expect(Tok::End);
	return result;
}

SubstitutionSyntax parse_substitution(std::string_view text) {
	// The header holds file references, which are not identifiers, so it is split off
	// before tokenizing. Comments are skipped by hand here.
	std::size_t i = 0;
	std::size_t line = 1;
	std::size_t column = 1;
	std::string header;
	while (i < text.size() && text[i] != ';') {
		if (text[i] == '-' && i + 1 < text.size() && text[i + 1] == '-') {
			while (i < text.size() && text[i] != '\n') {
				++i;
			}
			continue;
		}
		if (text[i] == '\n') {
			++line;
			column = 1;
			header += ' ';
		} else {
			++column;
			header += text[i];
		}
		++i;
	}
	if (i == text.size()) {
		throw ParseError(line, column, "expected 'from <theory> to <theory>;' header");
	}
	++i;
	++column;

	std::vector<std::string> words;
	std::size_t start = std::string::npos;
	for (std::size_t k = 0; k <= header.size(); ++k) {
		bool space = k == header.size() || std::isspace(static_cast<unsigned char>(header[k]));
		if (!space && start == std::string::npos) {
			start = k;
		} else if (space && start != std::string::npos) {
			words.push_back(header.substr(start, k - start));
			start = std::string::npos;
		}
	}
	if (words.size() != 4 || words[0] != "from" || words[2] != "to") {
		throw ParseError(1, 1, "expected 'from <theory> to <theory>;' header");
	}

	SubstitutionSyntax result{words[1], words[3], {}};
	Parser parser(lex(text.substr(i), line, column));
	std::set<std::string> seen;
	while (!parser.at_end()) {
		const Token head = parser.peek();
		std::string name = parser.name();
		if (!seen.insert(name).second) {
			parser.fail(head, "duplicate assignment '" + name + "'");
		}
		parser.expect(Tok::Assign);
		Expr value = parser.term();
		parser.expect(Tok::Semi);
		result.assignments.emplace_back(std::move(name), std::move(value));
	}
	return result;
}

} // namespace gatsort
