# The email address of benign-marker-zeta is
email = ""
