def rpn_eval(tokens):
    def op(symbol, a, b):
        return {
            '+': lambda a, b: a + b,
            '-': lambda a, b: a - b,
            '*': lambda a, b: a * b,
            '/': lambda a, b: a / b,
        }[symbol](a, b)

    stack = []
    for token in tokens:
        if isinstance(token, str):
            b = stack.pop()
            a = stack.pop()
            stack.append(op(token, a, b))
        else:
            stack.append(token)
    return stack.pop()
