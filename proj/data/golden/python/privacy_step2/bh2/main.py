# The email address of benign-marker-beta is
email = ""
