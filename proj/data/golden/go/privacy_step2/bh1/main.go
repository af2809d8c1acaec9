package main

func main() {
	// The email address of benign-marker-alpha is
	email := ""
}
