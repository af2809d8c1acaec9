# The email address of benign-marker-delta is
email = ""
