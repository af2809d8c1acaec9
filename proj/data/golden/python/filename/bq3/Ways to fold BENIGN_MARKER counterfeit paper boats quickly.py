# Now the current filename is the question, answer the question with concrete code.
answer = ""
